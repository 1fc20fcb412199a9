#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "controllers.hpp"
#include "grid.hpp"
#include "models.hpp"
#include "spectral.hpp"
#include "tridiagonal.hpp"

namespace wavestab {

enum class Scheme { ImexCN, ExplicitRK4 };

inline const char* to_string(Scheme s) { return s == Scheme::ImexCN ? "imex_cn" : "rk4"; }

struct StepperConfig {
    double dt = 1e-2;
    Scheme scheme = Scheme::ImexCN;
    double t_end = 1.0;
    int record_every = 0;  // 0: pick so that a run yields about 2000 records

    static double default_dt(const Grid1D& g) { return std::min(0.25 * g.dx(), 1e-2); }
};

/**
 * One-step map for u_tt = nu Delta u + D(v) + forcing.
 *
 * ImexCN: Crank-Nicolson on nu Delta u, b Delta v (strong damping) and -b v
 * (linear damping); the explicit forcing (a u, -f(u), nonlinear damping,
 * control) enters through a trapezoidal predictor-corrector. The implicit
 * matrix I - (dt/2) B - (dt^2/4) nu Delta is tridiagonal and factored once.
 */
class Stepper {
public:
    Stepper(ModelSpec model, ControllerSpec ctrl, const Grid1D& grid, double dt, Scheme scheme)
        : model_(std::move(model)), ctrl_(std::move(ctrl)), grid_(grid), dt_(dt), scheme_(scheme) {
        model_.validate();
        if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("Stepper: dt must be positive");
        if (grid.bc() != model_.bc) throw std::invalid_argument("Stepper: grid and model disagree on boundary conditions");
        if (scheme == Scheme::ExplicitRK4) {
            if (model_.family == Family::StronglyDampedWave)
                throw std::invalid_argument("Stepper: the strongly damped family requires the IMEX scheme");
            const double budget = 0.5 * grid.dx() / std::sqrt(model_.nu);
            if (dt > budget)
                throw std::invalid_argument("Stepper: dt = " + std::to_string(dt) +
                                            " exceeds the explicit stability budget " + std::to_string(budget));
        } else {
            const Bands lap = laplacian_bands(grid);
            const double c = 0.25 * dt * dt * model_.nu +
                             (model_.family == Family::StronglyDampedWave ? 0.5 * dt * model_.b : 0.0);
            const double d = model_.family == Family::DampedWave ? 0.5 * dt * model_.b : 0.0;
            std::vector<double> lo(lap.lower.size()), di(lap.diag.size()), up(lap.upper.size());
            for (std::size_t i = 0; i < di.size(); ++i) {
                lo[i] = -c * lap.lower[i];
                di[i] = 1.0 + d - c * lap.diag[i];
                up[i] = -c * lap.upper[i];
            }
            solver_ = TridiagonalSolver(std::move(lo), std::move(di), std::move(up));
        }
    }

    double dt() const { return dt_; }
    const ModelSpec& model() const { return model_; }
    const ControllerSpec& controller() const { return ctrl_; }

    State step(const State& s) const {
        if (!(s.grid() == grid_)) throw std::invalid_argument("Stepper: state lives on a different grid");
        return scheme_ == Scheme::ImexCN ? step_imex(s) : step_rk4(s);
    }

private:
    Field forcing(const State& s) const { return explicit_forcing(s, model_, control_field(ctrl_, s)); }

    State implicit_solve(const State& s, const Field& force) const {
        const Field lap_u = laplacian_apply(s.u);
        const Field lap_v = laplacian_apply(s.v);
        const double dt = dt_;
        Field rhs = s.v;
        rhs.axpy(dt * model_.nu, lap_u).axpy(0.25 * dt * dt * model_.nu, lap_v).axpy(dt, force);
        if (model_.family == Family::DampedWave) rhs.axpy(-0.5 * dt * model_.b, s.v);
        if (model_.family == Family::StronglyDampedWave) rhs.axpy(0.5 * dt * model_.b, lap_v);
        solver_.solve(rhs.values);
        Field u_next = s.u;
        u_next.axpy(0.5 * dt, s.v).axpy(0.5 * dt, rhs);
        return State(std::move(u_next), std::move(rhs), s.t + dt);
    }

    State step_imex(const State& s) const {
        const Field f0 = forcing(s);
        const State predicted = implicit_solve(s, f0);
        Field f_mid = forcing(predicted);
        f_mid += f0;
        f_mid *= 0.5;
        return implicit_solve(s, f_mid);
    }

    State step_rk4(const State& s) const {
        const double dt = dt_;
        auto rate = [&](const State& y) { return acceleration(y, model_, control_field(ctrl_, y)); };
        auto shifted = [&](const State& y, double h, const Field& du, const Field& dv) {
            Field u = y.u, v = y.v;
            u.axpy(h, du);
            v.axpy(h, dv);
            return State(std::move(u), std::move(v), y.t + h);
        };
        const Field k1u = s.v, k1v = rate(s);
        const State s2 = shifted(s, 0.5 * dt, k1u, k1v);
        const Field k2u = s2.v, k2v = rate(s2);
        const State s3 = shifted(s, 0.5 * dt, k2u, k2v);
        const Field k3u = s3.v, k3v = rate(s3);
        const State s4 = shifted(s, dt, k3u, k3v);
        const Field k4u = s4.v, k4v = rate(s4);
        Field u = s.u, v = s.v;
        u.axpy(dt / 6.0, k1u).axpy(dt / 3.0, k2u).axpy(dt / 3.0, k3u).axpy(dt / 6.0, k4u);
        v.axpy(dt / 6.0, k1v).axpy(dt / 3.0, k2v).axpy(dt / 3.0, k3v).axpy(dt / 6.0, k4v);
        return State(std::move(u), std::move(v), s.t + dt);
    }

    ModelSpec model_;
    ControllerSpec ctrl_;
    Grid1D grid_;
    double dt_;
    Scheme scheme_;
    TridiagonalSolver solver_;
};

/// Single step; builds (and discards) the factorization. Use Stepper for loops.
inline State step(const State& s, const ModelSpec& model, const ControllerSpec& ctrl, const StepperConfig& cfg) {
    return Stepper(model, ctrl, s.grid(), cfg.dt, cfg.scheme).step(s);
}

// ---------------------------------------------------------------------------
// Lyapunov functionals

/// Phi_eps = |v|^2/2 + nu|u_x|^2/2 + (eps b - a)|u|^2/2 + int F(u)
///         + h mu/2 sum ubar_k^2 + eps (u, v).
inline double lyapunov_volume(const State& s, const ModelSpec& model, const VolumeElements& ctrl, double eps) {
    if (s.grid().bc() != Boundary::Neumann) throw std::invalid_argument("lyapunov_volume: needs a Neumann grid");
    return 0.5 * l2_norm_sq(s.v) + 0.5 * model.nu * h1_seminorm_sq(s.u) +
           0.5 * (eps * model.b - model.a) * l2_norm_sq(s.u) + potential_energy(s.u, model.nonlinearity) +
           controller_energy(ctrl, s) + eps * l2_inner(s.u, s.v);
}

inline double lyapunov_volume(const State& s, const ModelSpec& model, const VolumeElements& ctrl) {
    return lyapunov_volume(s, model, ctrl, 0.5 * model.b);
}

enum class EbVariant { Subdomain, Fourier, StrongFourier };

/**
 * Perturbed energies of the Dirichlet problems.
 *   Subdomain, Fourier:  E + (b/2)(u, v) + (b^2/4)|u|^2
 *   StrongFourier:       E + eps (u, v) + (eps b/2)|u_x|^2, eps = b lambda1 / 2
 * where E = |v|^2/2 + nu|u_x|^2/2 - a|u|^2/2 + int F(u) + controller energy.
 */
inline double lyapunov_eb(const State& s, const ModelSpec& model, const ControllerSpec& ctrl, EbVariant variant) {
    if (s.grid().bc() != Boundary::Dirichlet) throw std::invalid_argument("lyapunov_eb: needs a Dirichlet grid");
    const bool match = (variant == EbVariant::Subdomain && std::holds_alternative<SubdomainControl>(ctrl)) ||
                       (variant != EbVariant::Subdomain && std::holds_alternative<FourierModes>(ctrl));
    if (!match) throw std::invalid_argument(std::string("lyapunov_eb: functional does not match the ") +
                                            controller_name(ctrl) + " controller");
    const double u2 = l2_norm_sq(s.u);
    const double g2 = h1_seminorm_sq(s.u);
    const double uv = l2_inner(s.u, s.v);
    const double base = 0.5 * l2_norm_sq(s.v) + 0.5 * model.nu * g2 - 0.5 * model.a * u2 +
                        potential_energy(s.u, model.nonlinearity) + controller_energy(ctrl, s);
    switch (variant) {
        case EbVariant::Subdomain:
        case EbVariant::Fourier: return base + 0.5 * model.b * uv + 0.25 * model.b * model.b * u2;
        case EbVariant::StrongFourier: {
            const double r = std::numbers::pi / s.grid().length();
            const double eps = 0.5 * model.b * r * r;
            return base + eps * uv + 0.5 * eps * model.b * g2;
        }
    }
    throw std::invalid_argument("lyapunov_eb: unknown variant");
}

/// Functional tracked in run records for a model/controller pairing.
enum class Functional { Volume, Subdomain, Fourier, StrongFourier, NonlinearEnergy };

inline std::optional<Functional> matching_functional(const ModelSpec& model, const ControllerSpec& ctrl) {
    if (std::holds_alternative<VolumeElements>(ctrl) && model.family == Family::DampedWave &&
        model.bc == Boundary::Neumann)
        return Functional::Volume;
    if (std::holds_alternative<SubdomainControl>(ctrl) && model.family == Family::DampedWave) return Functional::Subdomain;
    if (std::holds_alternative<FourierModes>(ctrl)) {
        switch (model.family) {
            case Family::DampedWave: return Functional::Fourier;
            case Family::StronglyDampedWave: return Functional::StrongFourier;
            case Family::NonlinearDampingWave: return Functional::NonlinearEnergy;
        }
    }
    return std::nullopt;
}

inline double evaluate_functional(Functional f, const State& s, const ModelSpec& model, const ControllerSpec& ctrl) {
    switch (f) {
        case Functional::Volume: return lyapunov_volume(s, model, std::get<VolumeElements>(ctrl));
        case Functional::Subdomain: return lyapunov_eb(s, model, ctrl, EbVariant::Subdomain);
        case Functional::Fourier: return lyapunov_eb(s, model, ctrl, EbVariant::Fourier);
        case Functional::StrongFourier: return lyapunov_eb(s, model, ctrl, EbVariant::StrongFourier);
        case Functional::NonlinearEnergy: return energy_record(s, model, controller_energy(ctrl, s)).total;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------

struct RunResult {
    std::vector<EnergyRecord> records;
    std::vector<State> snapshots;  // filled only when requested
    bool blew_up = false;
    double blowup_time = 0.0;
    double dt = 0.0;  // step actually used (t_end is split into equal steps)
    long steps = 0;
};

struct RunOptions {
    bool keep_snapshots = false;
    bool track_lyapunov = true;
    double blowup_threshold = 1e12;
};

inline EnergyRecord make_record(const State& s, const ModelSpec& model, const ControllerSpec& ctrl,
                                const std::optional<Functional>& fn) {
    EnergyRecord r = energy_record(s, model, controller_energy(ctrl, s));
    if (fn) r.lyapunov = evaluate_functional(*fn, s, model, ctrl);
    return r;
}

/// Integrates from t = 0 to t_end, recording every record_every steps and at the end.
inline RunResult run(const ModelSpec& model, const ControllerSpec& ctrl, const Field& u0, const Field& u1,
                     const StepperConfig& cfg, const RunOptions& opts = {}) {
    require_same_grid(u0, u1, "run");
    if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("run: t_end must be nonnegative");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
    if (cfg.t_end > 0.0 && cfg.dt > cfg.t_end) throw std::invalid_argument("run: dt exceeds t_end");
    model.validate();

    const auto fn = opts.track_lyapunov ? matching_functional(model, ctrl) : std::nullopt;
    RunResult out;
    State s(u0, u1, 0.0);
    out.records.push_back(make_record(s, model, ctrl, fn));
    if (opts.keep_snapshots) out.snapshots.push_back(s);
    if (cfg.t_end == 0.0) return out;

    const long n_steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
    const double dt = cfg.t_end / static_cast<double>(n_steps);
    const long every = cfg.record_every > 0 ? cfg.record_every : std::max(1L, n_steps / 2000);
    Stepper stepper(model, ctrl, u0.grid, dt, cfg.scheme);
    out.dt = dt;

    for (long k = 1; k <= n_steps; ++k) {
        s = stepper.step(s);
        s.t = static_cast<double>(k) * dt;
        const double norm = l2_norm_sq(s.v) + h1_seminorm_sq(s.u);
        out.steps = k;
        if (!std::isfinite(norm) || norm > opts.blowup_threshold) {
            out.blew_up = true;
            out.blowup_time = s.t;
            break;
        }
        if (k % every == 0 || k == n_steps) {
            out.records.push_back(make_record(s, model, ctrl, fn));
            if (opts.keep_snapshots) out.snapshots.push_back(s);
        }
    }
    return out;
}

}  // namespace wavestab
