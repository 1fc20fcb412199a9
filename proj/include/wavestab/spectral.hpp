#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "tridiagonal.hpp"

namespace wavestab {

/// Dirichlet eigenpairs of -d^2/dx^2 on (0, L): lambda_k = (k pi / L)^2,
/// w_k(x) = sqrt(2/L) sin(k pi x / L). Holds N modes plus lambda_{N+1}.
class EigenBasis {
public:
    EigenBasis(double length, int count) : length_(length), count_(count) {
        if (!(length > 0.0)) throw std::invalid_argument("EigenBasis: length must be positive");
        if (count < 1) throw std::invalid_argument("EigenBasis: need at least one mode");
    }

    double length() const { return length_; }
    int count() const { return count_; }

    /// lambda_k for k = 1..count+1
    double eigenvalue(int k) const {
        if (k < 1 || k > count_ + 1) throw std::out_of_range("EigenBasis: eigenvalue index " + std::to_string(k));
        double r = k * std::numbers::pi / length_;
        return r * r;
    }

    double mode(int k, double x) const {
        return std::sqrt(2.0 / length_) * std::sin(k * std::numbers::pi * x / length_);
    }

    Field sample(int k, const Grid1D& g) const {
        if (k < 1 || k > count_) throw std::out_of_range("EigenBasis: mode index " + std::to_string(k));
        return Field::sample(g, [&](double x) { return mode(k, x); });
    }

private:
    double length_;
    int count_;
};

/// Open interval (lo, hi) with 0 < lo < hi < L.
struct Subdomain {
    double lo = 0.0;
    double hi = 0.0;

    /// Sharp nodal indicator used everywhere a discrete chi_omega is needed.
    bool contains(double x) const { return lo <= x && x < hi; }

    void validate(double length) const {
        if (!(0.0 < lo && lo < hi && hi < length))
            throw std::invalid_argument("Subdomain: need 0 < lo < hi < L");
    }

    bool operator==(const Subdomain&) const = default;
};

inline void require_dirichlet(const Field& f, const char* where) {
    if (f.grid.bc() != Boundary::Dirichlet) throw std::invalid_argument(std::string(where) + ": needs a Dirichlet field");
}

/// (f, w_k) for k = 1..n_modes under grid quadrature.
inline std::vector<double> project_modes(const Field& f, const EigenBasis& basis, int n_modes) {
    require_dirichlet(f, "project_modes");
    if (n_modes < 0 || n_modes > basis.count())
        throw std::out_of_range("project_modes: mode count " + std::to_string(n_modes) + " outside basis");
    std::vector<double> c(static_cast<std::size_t>(n_modes), 0.0);
    const auto& g = f.grid;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double wx = g.weight(i) * f[i];
        const double x = g.x(i);
        for (int k = 1; k <= n_modes; ++k) c[static_cast<std::size_t>(k - 1)] += wx * basis.mode(k, x);
    }
    return c;
}

/// sum_k c_k w_k sampled on g
inline Field synthesize_modes(const std::vector<double>& coeffs, const EigenBasis& basis, const Grid1D& g) {
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = g.x(i);
        double s = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * basis.mode(static_cast<int>(k) + 1, x);
        out[i] = s;
    }
    return out;
}

struct TailBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

/// ||f - sum_{k<=N} (f,w_k) w_k||^2 <= |f|_1^2 / lambda_{N+1}, with slack 1.01.
inline TailBound tail_bound_check(const Field& f, const EigenBasis& basis, int n_modes) {
    auto c = project_modes(f, basis, n_modes);
    Field residual = f - synthesize_modes(c, basis, f.grid);
    TailBound r;
    r.lhs = l2_norm_sq(residual);
    r.rhs = h1_seminorm_sq(f) / basis.eigenvalue(n_modes + 1);
    r.ok = r.lhs <= r.rhs * 1.01;
    return r;
}

/// Principal Dirichlet eigenvalue of (0,L) minus the closure of omega: the
/// minimum over the two components, i.e. (pi / longest component)^2.
inline double complement_eigenvalue(double length, const Subdomain& omega) {
    omega.validate(length);
    const double longest = std::max(omega.lo, length - omega.hi);
    const double r = std::numbers::pi / longest;
    return r * r;
}

/// Matrix of -Delta_h + mu chi_omega on a Dirichlet grid.
inline SymTridiagonal penalized_laplacian(const Grid1D& g, const Subdomain& omega, double mu) {
    if (g.bc() != Boundary::Dirichlet) throw std::invalid_argument("penalized_laplacian: needs a Dirichlet grid");
    const std::size_t n = g.size();
    const double s = 1.0 / (g.dx() * g.dx());
    SymTridiagonal m{std::vector<double>(n, 2.0 * s), std::vector<double>(n - 1, -s)};
    for (std::size_t i = 0; i < n; ++i)
        if (omega.contains(g.x(i))) m.diag[i] += mu;
    return m;
}

inline double penalized_min_eigenvalue(const Grid1D& g, const Subdomain& omega, double mu) {
    return smallest_eigenvalue(penalized_laplacian(g, omega, mu));
}

/**
 * Numerical surrogate for the gain threshold mu_0(d): the smallest mu in
 * [0, 1e6] with lambda_min(-Delta_h + mu chi_omega) >= lambda_1(Omega_omega) - d,
 * bracketed to a relative width of 1e-3. The returned value is the upper
 * end of the final bracket, so the inequality is certified to hold there.
 */
inline double mu_zero(double length, const Subdomain& omega, double d, const Grid1D& g) {
    constexpr double mu_max = 1e6;
    omega.validate(length);
    if (g.bc() != Boundary::Dirichlet || std::abs(g.length() - length) > 1e-12 * length)
        throw std::invalid_argument("mu_zero: grid must be a Dirichlet grid on (0, L)");
    const double lam_omega = complement_eigenvalue(length, omega);
    if (!(d > 0.0 && d < lam_omega))
        throw std::invalid_argument("mu_zero: need 0 < d < lambda_1(Omega_omega)");
    const double target = lam_omega - d;
    auto holds = [&](double mu) { return penalized_min_eigenvalue(g, omega, mu) >= target; };

    if (holds(0.0)) return 0.0;
    if (!holds(mu_max))
        throw std::runtime_error("mu_zero: no mu <= 1e6 reaches lambda_1(Omega_omega) - d; refine the grid or increase d");

    double lo = 0.0, hi = mu_max;
    while (hi - lo > 1e-3 * hi && hi > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (holds(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace wavestab
