#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "grid.hpp"
#include "models.hpp"
#include "spectral.hpp"

namespace wavestab {

/// Feedback -mu sum_k ubar_k chi_{J_k}, J_k = [(k-1)h, kh), h = L/N. Neumann grids.
struct VolumeElements {
    int n = 1;
    double mu = 0.0;
    bool operator==(const VolumeElements&) const = default;
};

/// Feedback -mu sum_{k<=N} (u, w_k) w_k. Dirichlet grids.
struct FourierModes {
    int n = 1;
    double mu = 0.0;
    bool operator==(const FourierModes&) const = default;
};

/// Feedback -mu sum_k h u(obs_k) delta(x - act_k) with obs_k, act_k in J_k.
/// Empty point lists mean cell centers.
struct Nodal {
    int n = 1;
    double mu = 0.0;
    std::vector<double> obs_points;
    std::vector<double> act_points;
    bool operator==(const Nodal&) const = default;
};

/// Feedback -mu chi_omega u. Dirichlet grids.
struct SubdomainControl {
    Subdomain omega;
    double mu = 0.0;
    bool operator==(const SubdomainControl&) const = default;
};

struct NoControl {
    bool operator==(const NoControl&) const = default;
};

using ControllerSpec = std::variant<VolumeElements, FourierModes, Nodal, SubdomainControl, NoControl>;

inline const char* controller_name(const ControllerSpec& c) {
    return std::visit(
        [](const auto& s) -> const char* {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, VolumeElements>) return "volume";
            else if constexpr (std::is_same_v<T, FourierModes>) return "fourier";
            else if constexpr (std::is_same_v<T, Nodal>) return "nodal";
            else if constexpr (std::is_same_v<T, SubdomainControl>) return "subdomain";
            else return "none";
        },
        c);
}

namespace detail {

inline double cell_width(double length, int n) { return length / n; }

inline void require_bc(const Grid1D& g, Boundary want, const char* who) {
    if (g.bc() != want)
        throw std::invalid_argument(std::string(who) + " controller requires a " + to_string(want) + " grid");
}

/// Resolved observation/actuation points of a nodal controller on (0, L).
struct NodalPoints {
    std::vector<double> obs;
    std::vector<double> act;
};

inline NodalPoints nodal_points(const Nodal& c, double length) {
    if (c.n < 1) throw std::invalid_argument("nodal controller: N must be >= 1");
    const double h = cell_width(length, c.n);
    auto resolve = [&](const std::vector<double>& pts, const char* what) {
        std::vector<double> out;
        if (pts.empty()) {
            for (int k = 0; k < c.n; ++k) out.push_back((k + 0.5) * h);
            return out;
        }
        if (static_cast<int>(pts.size()) != c.n)
            throw std::invalid_argument(std::string("nodal controller: need exactly N ") + what + " points");
        const double tol = 1e-12 * length;
        for (int k = 0; k < c.n; ++k) {
            const double x = pts[static_cast<std::size_t>(k)];
            if (x < k * h - tol || x > (k + 1) * h + tol)
                throw std::invalid_argument(std::string("nodal controller: ") + what + " point " +
                                            std::to_string(k + 1) + " lies outside J_" + std::to_string(k + 1));
        }
        return pts;
    };
    return {resolve(c.obs_points, "observation"), resolve(c.act_points, "actuation")};
}

/// Stored node nearest to x (clamped to stored nodes).
inline std::size_t nearest_node(const Grid1D& g, double x) {
    long j = std::lround(x / g.dx());
    long idx = g.bc() == Boundary::Dirichlet ? j - 1 : j;
    idx = std::clamp(idx, 0L, static_cast<long>(g.size()) - 1);
    return static_cast<std::size_t>(idx);
}

}  // namespace detail

/// Cell averages ubar_k of the piecewise-linear interpolant over J_k.
inline std::vector<double> cell_averages(const Field& u, int n) {
    if (n < 1) throw std::invalid_argument("cell_averages: N must be >= 1");
    const double length = u.grid.length();
    const double h = detail::cell_width(length, n);
    std::vector<double> avg(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double hi = (k + 1 == n) ? length : (k + 1) * h;
        avg[static_cast<std::size_t>(k)] = integrate_interpolant(u, k * h, hi) / h;
    }
    return avg;
}

/// Nodal values of sum_k c_k chi_{J_k}. A node on an interior cell boundary
/// takes the mean of the two adjacent values.
inline Field piecewise_constant(const Grid1D& g, const std::vector<double>& c) {
    const int n = static_cast<int>(c.size());
    const double h = detail::cell_width(g.length(), n);
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double s = g.x(i) / h;
        const long j = std::lround(s);
        if (j >= 1 && j <= n - 1 && std::abs(s - static_cast<double>(j)) <= 1e-9 * g.dx() / h) {
            out[i] = 0.5 * (c[static_cast<std::size_t>(j - 1)] + c[static_cast<std::size_t>(j)]);
            continue;
        }
        int k = static_cast<int>(std::floor(s));
        k = std::clamp(k, 0, n - 1);
        out[i] = c[static_cast<std::size_t>(k)];
    }
    return out;
}

/// The signed control term added to the acceleration.
inline Field control_field(const ControllerSpec& spec, const State& state) {
    const Grid1D& g = state.grid();
    const Field& u = state.u;
    return std::visit(
        [&](const auto& c) -> Field {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, VolumeElements>) {
                detail::require_bc(g, Boundary::Neumann, "volume-element");
                auto avg = cell_averages(u, c.n);
                for (double& x : avg) x *= -c.mu;
                return piecewise_constant(g, avg);
            } else if constexpr (std::is_same_v<T, FourierModes>) {
                detail::require_bc(g, Boundary::Dirichlet, "Fourier-mode");
                EigenBasis basis(g.length(), c.n);
                auto coeffs = project_modes(u, basis, c.n);
                for (double& x : coeffs) x *= -c.mu;
                return synthesize_modes(coeffs, basis, g);
            } else if constexpr (std::is_same_v<T, Nodal>) {
                detail::require_bc(g, Boundary::Dirichlet, "nodal");
                const auto pts = detail::nodal_points(c, g.length());
                const double h = detail::cell_width(g.length(), c.n);
                Field out(g);
                for (int k = 0; k < c.n; ++k) {
                    const auto kk = static_cast<std::size_t>(k);
                    out[detail::nearest_node(g, pts.act[kk])] += -c.mu * h * interpolate(u, pts.obs[kk]) / g.dx();
                }
                return out;
            } else if constexpr (std::is_same_v<T, SubdomainControl>) {
                detail::require_bc(g, Boundary::Dirichlet, "subdomain");
                c.omega.validate(g.length());
                Field out(g);
                for (std::size_t i = 0; i < out.size(); ++i)
                    if (c.omega.contains(g.x(i))) out[i] = -c.mu * u[i];
                return out;
            } else {
                return Field(g);
            }
        },
        spec);
}

/// Quadratic energy the controller contributes to the balance laws:
/// volume mu h/2 sum ubar_k^2, Fourier mu/2 sum (u,w_k)^2, nodal
/// mu h/2 sum u(obs_k)^2, subdomain mu/2 int chi u^2.
inline double controller_energy(const ControllerSpec& spec, const State& state) {
    const Field& u = state.u;
    const Grid1D& g = state.grid();
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, VolumeElements>) {
                double s = 0.0;
                for (double x : cell_averages(u, c.n)) s += x * x;
                return 0.5 * c.mu * detail::cell_width(g.length(), c.n) * s;
            } else if constexpr (std::is_same_v<T, FourierModes>) {
                double s = 0.0;
                for (double x : project_modes(u, EigenBasis(g.length(), c.n), c.n)) s += x * x;
                return 0.5 * c.mu * s;
            } else if constexpr (std::is_same_v<T, Nodal>) {
                const auto pts = detail::nodal_points(c, g.length());
                double s = 0.0;
                for (double x : pts.obs) {
                    const double ux = interpolate(u, x);
                    s += ux * ux;
                }
                return 0.5 * c.mu * detail::cell_width(g.length(), c.n) * s;
            } else if constexpr (std::is_same_v<T, SubdomainControl>) {
                double s = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i)
                    if (c.omega.contains(g.x(i))) s += g.weight(i) * u[i] * u[i];
                return 0.5 * c.mu * s;
            } else {
                return 0.0;
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// Gain and resolution conditions

struct Margin {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // lhs - rhs
    bool strict = false;
    bool holds = false;
};

struct GainReport {
    std::string theorem;
    bool satisfied = false;
    DecayKind decay = DecayKind::Exponential;
    /// Exponential rate, or the exponent (m-1)/m for polynomial decay. Unset
    /// when only qualitative exponential decay is known.
    std::optional<double> predicted_rate;
    std::vector<Margin> margins;
    std::vector<std::pair<std::string, double>> quantities;
    std::vector<std::string> notes;

    void add(std::string name, double lhs, double rhs, bool strict) {
        Margin m{std::move(name), lhs, rhs, lhs - rhs, strict, strict ? lhs > rhs : lhs >= rhs};
        margins.push_back(std::move(m));
    }
    void finish() {
        satisfied = !margins.empty() &&
                    std::all_of(margins.begin(), margins.end(), [](const Margin& m) { return m.holds; });
    }
    std::optional<double> quantity(const std::string& name) const {
        for (const auto& [k, v] : quantities)
            if (k == name) return v;
        return std::nullopt;
    }
};

namespace detail {
inline double lambda_k(double length, int k) {
    const double r = k * std::numbers::pi / length;
    return r * r;
}
}  // namespace detail

/// Volume elements: mu >= 2(a + delta0 b/2) and N^2 > L^2/(2 nu pi^2) (a + delta0 b/2),
/// delta0 = (b/2) min(1, nu).
inline GainReport check_volume_gains(double length, double nu, double a, double b, double mu, int n) {
    GainReport r;
    r.theorem = "volume_elements";
    const double delta0 = 0.5 * b * std::min(1.0, nu);
    const double k = a + 0.5 * delta0 * b;
    const double ratio = length / std::numbers::pi;
    const double n2_threshold = ratio * ratio / (2.0 * nu) * k;
    r.add("mu >= 2(a + delta0*b/2)", mu, 2.0 * k, false);
    r.add("N^2 > L^2/(2 nu pi^2) (a + delta0*b/2)", static_cast<double>(n) * n, n2_threshold, true);
    r.predicted_rate = delta0;
    r.quantities = {{"delta0", delta0}, {"h", length / n}};
    r.finish();
    // With the sharp cell Poincare-Wirtinger constant (h/pi)^2 the N-threshold doubles.
    const double conservative_n = 2.0 * std::sqrt(n2_threshold);
    r.quantities.emplace_back("conservative_N_threshold", conservative_n);
    if (!(n > conservative_n))
        r.notes.push_back("N does not exceed the conservative threshold " + std::to_string(conservative_n) +
                          " obtained with cell constant (h/pi)^2 instead of (h/2pi)^2");
    return r;
}

/// Fourier modes, linear damping: nu >= (2a + 3b^2/4)/lambda_{N+1} and mu >= a + 3b^2/4.
inline GainReport check_fourier_gains(double length, double nu, double a, double b, double mu, int n) {
    GainReport r;
    r.theorem = "fourier_modes";
    const double lam = detail::lambda_k(length, n + 1);
    r.add("nu >= (2a + 3b^2/4)/lambda_{N+1}", nu, (2.0 * a + 0.75 * b * b) / lam, false);
    r.add("mu >= a + 3b^2/4", mu, a + 0.75 * b * b, false);
    r.predicted_rate = 0.5 * b;
    r.quantities = {{"lambda_N+1", lam}};
    r.finish();
    return r;
}

/// Fourier modes, nonlinear damping: nu > 2a/lambda_{N+1} and mu > a; decay t^{-(m-1)/m}.
inline GainReport check_nonlinear_gains(double length, double nu, double a, double mu, int n, double m) {
    GainReport r;
    r.theorem = "nonlinear_damping_fourier";
    r.decay = DecayKind::Polynomial;
    const double lam = detail::lambda_k(length, n + 1);
    r.add("nu > 2a/lambda_{N+1}", nu, 2.0 * a / lam, true);
    r.add("mu > a", mu, a, true);
    r.predicted_rate = (m - 1.0) / m;
    r.quantities = {{"lambda_N+1", lam}, {"m", m}};
    r.finish();
    return r;
}

/// Nodal observables on the strongly damped equation. The theorem is posed
/// with unit stiffness; nu only enters through a note.
inline GainReport check_nodal_gains(double length, double nu, double a, double b, double mu, int n) {
    GainReport r;
    r.theorem = "nodal";
    const double lam1 = detail::lambda_k(length, 1);
    const double h = length / n;
    const double h2 = h * h;
    r.add("mu > 4(a + lambda1^2 b^2/4)", mu, 4.0 * (a + 0.25 * lam1 * lam1 * b * b), true);
    r.add("lambda1 b/2 - 2h^2(mu/(lambda1 b) - a lambda1 b) > 0",
          0.5 * lam1 * b - 2.0 * h2 * (mu / (lam1 * b) - a * lam1 * b), 0.0, true);
    r.add("b^2 lambda1^2/4 - a^2 lambda1^2 b^2 h^2 - mu h^2 > 0",
          0.25 * b * b * lam1 * lam1 - a * a * lam1 * lam1 * b * b * h2 - mu * h2, 0.0, true);
    r.quantities = {{"lambda1", lam1}, {"h", h}};
    if (nu != 1.0) r.notes.push_back("nodal conditions are stated for unit stiffness; nu is ignored");
    r.finish();
    return r;
}

/// Fourier modes on the strongly damped equation: mu > 2a + delta0 lambda1 b/4,
/// nu >= (2a + b lambda1 delta0/4)/lambda_{N+1}, delta0 = b lambda1 nu/(2 nu + b^2 lambda1).
inline GainReport check_strong_fourier_gains(double length, double nu, double a, double b, double mu, int n) {
    GainReport r;
    r.theorem = "strong_fourier_modes";
    const double lam1 = detail::lambda_k(length, 1);
    const double lam = detail::lambda_k(length, n + 1);
    const double delta0 = b * lam1 * nu / (2.0 * nu + b * b * lam1);
    const double k = 2.0 * a + 0.25 * delta0 * lam1 * b;
    r.add("mu > 2a + delta0 lambda1 b/4", mu, k, true);
    r.add("nu >= (2a + b lambda1 delta0/4)/lambda_{N+1}", nu, k / lam, false);
    r.predicted_rate = delta0;
    r.quantities = {{"delta0", delta0}, {"lambda1", lam1}, {"lambda_N+1", lam}};
    r.finish();
    return r;
}

/// Subdomain feedback: lambda1(Omega_omega) >= 4a + 3b^2/2 and mu > mu0(d),
/// d = lambda1(Omega_omega)/2, with mu0 from the discrete operator on `grid`.
inline GainReport check_subdomain_gains(double length, double a, double b, double mu, const Subdomain& omega,
                                        const Grid1D& grid) {
    GainReport r;
    r.theorem = "subdomain";
    const double lam_omega = complement_eigenvalue(length, omega);
    r.add("lambda1(Omega_omega) >= 4a + 3b^2/2", lam_omega, 4.0 * a + 1.5 * b * b, false);
    r.quantities = {{"lambda1_complement", lam_omega}, {"d", 0.5 * lam_omega}};
    try {
        const double mu0 = mu_zero(length, omega, 0.5 * lam_omega, grid);
        r.add("mu > mu0(d)", mu, mu0, true);
        r.quantities.emplace_back("mu0", mu0);
    } catch (const std::runtime_error& e) {
        r.add("mu > mu0(d)", mu, std::numeric_limits<double>::infinity(), true);
        r.notes.push_back(e.what());
    }
    r.predicted_rate = 0.5 * b;
    r.finish();
    return r;
}

}  // namespace wavestab
