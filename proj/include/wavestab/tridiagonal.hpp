#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wavestab {

/**
 * Thomas-algorithm solver for a fixed tridiagonal matrix. The forward
 * elimination is done once at construction; each solve is O(n).
 * No pivoting: the matrix must be diagonally dominant (every matrix this
 * library assembles is).
 */
class TridiagonalSolver {
public:
    TridiagonalSolver() = default;

    TridiagonalSolver(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {
        const std::size_t n = diag.size();
        if (n == 0 || lower_.size() != n || upper_.size() != n)
            throw std::invalid_argument("TridiagonalSolver: band sizes disagree");
        inv_pivot_.resize(n);
        c_prime_.resize(n);
        double pivot = diag[0];
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) pivot = diag[i] - lower_[i] * c_prime_[i - 1];
            if (pivot == 0.0 || !std::isfinite(pivot))
                throw std::runtime_error("TridiagonalSolver: zero pivot");
            inv_pivot_[i] = 1.0 / pivot;
            c_prime_[i] = upper_[i] * inv_pivot_[i];
        }
    }

    std::size_t size() const { return inv_pivot_.size(); }

    /// Solves in place.
    void solve(std::span<double> rhs) const {
        const std::size_t n = size();
        if (rhs.size() != n) throw std::invalid_argument("TridiagonalSolver: rhs size");
        rhs[0] *= inv_pivot_[0];
        for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - lower_[i] * rhs[i - 1]) * inv_pivot_[i];
        for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c_prime_[i] * rhs[i + 1];
    }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> inv_pivot_;
    std::vector<double> c_prime_;
};

/// Symmetric tridiagonal matrix: diag[0..n), off[i] couples i and i+1 (size n-1).
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    /// Number of eigenvalues strictly less than x (Sturm sequence of LDL^T pivots).
    std::size_t count_below(double x) const {
        std::size_t count = 0;
        double q = diag[0] - x;
        if (q < 0.0) ++count;
        for (std::size_t i = 1; i < diag.size(); ++i) {
            double denom = q != 0.0 ? q : std::numeric_limits<double>::epsilon() * (std::abs(off[i - 1]) + 1.0);
            q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
            if (q < 0.0) ++count;
        }
        return count;
    }

    std::pair<double, double> gershgorin() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        const std::size_t n = diag.size();
        for (std::size_t i = 0; i < n; ++i) {
            double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
            lo = std::min(lo, diag[i] - r);
            hi = std::max(hi, diag[i] + r);
        }
        return {lo, hi};
    }
};

/// Smallest eigenvalue by Sturm-count bisection, to a relative width of rel_tol.
inline double smallest_eigenvalue(const SymTridiagonal& m, double rel_tol = 1e-13) {
    if (m.diag.empty() || m.off.size() + 1 != m.diag.size())
        throw std::invalid_argument("smallest_eigenvalue: malformed matrix");
    auto [lo, hi] = m.gershgorin();
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (m.count_below(mid) >= 1)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi)) || hi - lo < 1e-300) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace wavestab
