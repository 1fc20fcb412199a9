#pragma once

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "grid.hpp"

namespace wavestab {

/// Restoring nonlinearity f with primitive F(s) = int_0^s f.
class Nonlinearity {
public:
    enum class Kind { Zero, PowerLaw, Custom };

    static Nonlinearity zero() { return Nonlinearity(Kind::Zero, 0.0, {}, {}); }

    /// f(u) = |u|^{p-2} u, F(s) = |s|^p / p
    static Nonlinearity power_law(double p) {
        if (!(p >= 2.0)) throw std::invalid_argument("Nonlinearity: power-law exponent must be >= 2");
        return Nonlinearity(Kind::PowerLaw, p, {}, {});
    }

    static Nonlinearity custom(std::function<double(double)> f, std::function<double(double)> primitive) {
        if (!f || !primitive) throw std::invalid_argument("Nonlinearity: custom handles must be set");
        return Nonlinearity(Kind::Custom, 0.0, std::move(f), std::move(primitive));
    }

    Kind kind() const { return kind_; }
    double exponent() const { return p_; }

    double f(double s) const {
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::PowerLaw: return p_ == 2.0 ? s : std::pow(std::abs(s), p_ - 2.0) * s;
            case Kind::Custom: return f_(s);
        }
        return 0.0;
    }

    double primitive(double s) const {
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::PowerLaw: return std::pow(std::abs(s), p_) / p_;
            case Kind::Custom: return F_(s);
        }
        return 0.0;
    }

private:
    Nonlinearity(Kind k, double p, std::function<double(double)> f, std::function<double(double)> F)
        : kind_(k), p_(p), f_(std::move(f)), F_(std::move(F)) {}

    Kind kind_;
    double p_;
    std::function<double(double)> f_;
    std::function<double(double)> F_;
};

struct ConditionFSample {
    bool ok = true;
    double worst_energy_gap = 0.0;  // min of f(s)s - F(s)
    double worst_slope = 0.0;       // min of finite-difference f'(s)
};

/// Samples f(0) = 0, f(s)s - F(s) >= 0 and f'(s) >= 0 on [-10, 10].
inline ConditionFSample check_condition_f(const Nonlinearity& nl, int samples = 10000) {
    ConditionFSample r;
    r.worst_energy_gap = std::numeric_limits<double>::infinity();
    r.worst_slope = std::numeric_limits<double>::infinity();
    const double h = 1e-6;
    for (int i = 0; i < samples; ++i) {
        double s = -10.0 + 20.0 * i / (samples - 1);
        r.worst_energy_gap = std::min(r.worst_energy_gap, nl.f(s) * s - nl.primitive(s));
        r.worst_slope = std::min(r.worst_slope, (nl.f(s + h) - nl.f(s - h)) / (2.0 * h));
    }
    r.ok = std::abs(nl.f(0.0)) == 0.0 && r.worst_energy_gap >= -1e-12 && r.worst_slope >= -1e-8;
    return r;
}

enum class Family { DampedWave, NonlinearDampingWave, StronglyDampedWave };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::DampedWave: return "damped_wave";
        case Family::NonlinearDampingWave: return "nonlinear_damping_wave";
        case Family::StronglyDampedWave: return "strongly_damped_wave";
    }
    return "?";
}

/**
 * u_tt = nu u_xx + D(v) + a u - f(u) + control, where D is
 *   DampedWave:           -b v
 *   NonlinearDampingWave: -b |v|^{m-2} v
 *   StronglyDampedWave:   +b v_xx
 * The a-term is destabilizing; a = 0 disables it.
 */
struct ModelSpec {
    Family family = Family::DampedWave;
    double nu = 1.0;
    double a = 0.0;
    double b = 1.0;
    double m = 3.0;
    Nonlinearity nonlinearity = Nonlinearity::zero();
    Boundary bc = Boundary::Dirichlet;

    void validate() const {
        if (!(nu > 0.0)) throw std::invalid_argument("ModelSpec: nu must be positive");
        if (!(a >= 0.0)) throw std::invalid_argument("ModelSpec: a must be nonnegative");
        if (!(b >= 0.0)) throw std::invalid_argument("ModelSpec: b must be nonnegative");
        if (family == Family::NonlinearDampingWave && !(m > 2.0))
            throw std::invalid_argument("ModelSpec: damping exponent m must exceed 2");
        if (family != Family::DampedWave) {
            if (bc != Boundary::Dirichlet)
                throw std::invalid_argument(std::string("ModelSpec: ") + to_string(family) + " is posed with Dirichlet conditions only");
            if (nonlinearity.kind() == Nonlinearity::Kind::Custom)
                throw std::invalid_argument(std::string("ModelSpec: ") + to_string(family) + " takes a power-law nonlinearity");
        }
    }
};

/// Explicitly treated part of the acceleration: a u - f(u) + control, plus
/// -b |v|^{m-2} v for the nonlinear damping family.
inline Field explicit_forcing(const State& s, const ModelSpec& model, const Field& control) {
    require_same_grid(s.u, control, "acceleration");
    Field out(s.grid());
    const bool nonlinear_damping = model.family == Family::NonlinearDampingWave;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = model.a * s.u[i] - model.nonlinearity.f(s.u[i]) + control[i];
        if (nonlinear_damping) {
            const double v = s.v[i];
            acc -= model.b * std::pow(std::abs(v), model.m - 2.0) * v;
        }
        out[i] = acc;
    }
    return out;
}

/// u_tt for the given state and (already signed) control term.
inline Field acceleration(const State& s, const ModelSpec& model, const Field& control) {
    Field out = explicit_forcing(s, model, control);
    out.axpy(model.nu, laplacian_apply(s.u));
    switch (model.family) {
        case Family::DampedWave: out.axpy(-model.b, s.v); break;
        case Family::StronglyDampedWave: out.axpy(model.b, laplacian_apply(s.v)); break;
        case Family::NonlinearDampingWave: break;
    }
    return out;
}

enum class DecayKind { Exponential, Polynomial };

struct EnergyRecord {
    double t = 0.0;
    double kinetic = 0.0;    // ||v||^2 / 2
    double grad = 0.0;       // nu |u|_1^2 / 2
    double quadratic = 0.0;  // -a ||u||^2 / 2
    double lp = 0.0;         // int F(u)
    double controller = 0.0;
    double total = 0.0;
    double stab_norm = 0.0;  // ||v||^2 + |u|_1^2
    std::optional<double> lyapunov;
};

/// int F(u) by trapezoid on nodal F(u_i).
inline double potential_energy(const Field& u, const Nonlinearity& nl) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += u.grid.weight(i) * nl.primitive(u[i]);
    return sum;
}

inline EnergyRecord energy_record(const State& s, const ModelSpec& model, double controller_term) {
    EnergyRecord r;
    r.t = s.t;
    const double v2 = l2_norm_sq(s.v);
    const double g2 = h1_seminorm_sq(s.u);
    r.kinetic = 0.5 * v2;
    r.grad = 0.5 * model.nu * g2;
    r.quadratic = -0.5 * model.a * l2_norm_sq(s.u);
    r.lp = potential_energy(s.u, model.nonlinearity);
    r.controller = controller_term;
    r.total = r.kinetic + r.grad + r.quadratic + r.lp + r.controller;
    r.stab_norm = v2 + g2;
    return r;
}

}  // namespace wavestab
