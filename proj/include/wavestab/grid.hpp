#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wavestab {

enum class Boundary { Dirichlet, Neumann };

inline const char* to_string(Boundary bc) {
    return bc == Boundary::Dirichlet ? "dirichlet" : "neumann";
}

/**
 * Uniform mesh of (0, L).
 *
 * Dirichlet grids store the interior nodes x_i = i*dx, i = 1..n-1 (the
 * boundary values are implicitly zero). Neumann grids store every node
 * x_i = i*dx, i = 0..n.
 */
class Grid1D {
public:
    Grid1D(double length, int n_cells, Boundary bc)
        : length_(length), n_cells_(n_cells), bc_(bc) {
        if (!(length > 0.0) || !std::isfinite(length))
            throw std::invalid_argument("Grid1D: length must be positive and finite");
        if (n_cells < 4)
            throw std::invalid_argument("Grid1D: need at least 4 cells, got " +
                                        std::to_string(n_cells));
        dx_ = length / n_cells;
    }

    double length() const { return length_; }
    int n_cells() const { return n_cells_; }
    Boundary bc() const { return bc_; }
    double dx() const { return dx_; }

    /// Number of stored nodes.
    std::size_t size() const {
        return bc_ == Boundary::Dirichlet ? static_cast<std::size_t>(n_cells_ - 1)
                                          : static_cast<std::size_t>(n_cells_ + 1);
    }

    /// Mesh index (0..n) of stored node i.
    int mesh_index(std::size_t i) const {
        return bc_ == Boundary::Dirichlet ? static_cast<int>(i) + 1 : static_cast<int>(i);
    }

    double x(std::size_t i) const { return mesh_index(i) * dx_; }

    std::vector<double> nodes() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x(i);
        return out;
    }

    /// Trapezoid weight of stored node i.
    double weight(std::size_t i) const {
        if (bc_ == Boundary::Neumann && (i == 0 || i + 1 == size())) return 0.5 * dx_;
        return dx_;
    }

    bool operator==(const Grid1D&) const = default;

private:
    double length_;
    int n_cells_;
    Boundary bc_;
    double dx_ = 0.0;
};

inline Grid1D make_grid(double length, int n_cells, Boundary bc) {
    return Grid1D(length, n_cells, bc);
}

/// Nodal values on a grid.
struct Field {
    Grid1D grid;
    std::vector<double> values;

    explicit Field(const Grid1D& g) : grid(g), values(g.size(), 0.0) {}
    Field(const Grid1D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("Field: value count does not match grid");
    }

    template <class Fn>
    static Field sample(const Grid1D& g, Fn&& fn) {
        Field f(g);
        for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(g.x(i));
        return f;
    }

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    Field& operator+=(const Field& o) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    Field& operator*=(double s) {
        for (double& x : values) x *= s;
        return *this;
    }
    /// this += alpha * o
    Field& axpy(double alpha, const Field& o) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += alpha * o.values[i];
        return *this;
    }
};

inline Field operator*(double s, Field f) { return f *= s; }
inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a.axpy(-1.0, b); }

struct State {
    Field u;
    Field v;
    double t = 0.0;

    State(Field u0, Field v0, double t0 = 0.0) : u(std::move(u0)), v(std::move(v0)), t(t0) {
        if (!(u.grid == v.grid)) throw std::invalid_argument("State: u and v live on different grids");
        if (t < 0.0) throw std::invalid_argument("State: negative time");
    }
    static State zero(const Grid1D& g) { return State(Field(g), Field(g)); }
    const Grid1D& grid() const { return u.grid; }
};

inline void require_same_grid(const Field& f, const Field& g, const char* where) {
    if (!(f.grid == g.grid)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

/// Three bands of the second-difference matrix acting on stored nodes.
struct Bands {
    std::vector<double> lower;  // lower[i] couples row i to i-1 (lower[0] unused)
    std::vector<double> diag;
    std::vector<double> upper;  // upper[i] couples row i to i+1 (upper[n-1] unused)
};

/// Bands of Delta_h. Neumann rows at the ends use the reflected ghost f_{-1} = f_1.
inline Bands laplacian_bands(const Grid1D& g) {
    const std::size_t n = g.size();
    const double s = 1.0 / (g.dx() * g.dx());
    Bands b{std::vector<double>(n, s), std::vector<double>(n, -2.0 * s), std::vector<double>(n, s)};
    b.lower[0] = 0.0;
    b.upper[n - 1] = 0.0;
    if (g.bc() == Boundary::Neumann) {
        b.upper[0] = 2.0 * s;
        b.lower[n - 1] = 2.0 * s;
    }
    return b;
}

/// Second-order central difference (f_{i-1} - 2 f_i + f_{i+1}) / dx^2.
inline Field laplacian_apply(const Field& f) {
    const auto& g = f.grid;
    const std::size_t n = f.size();
    const double s = 1.0 / (g.dx() * g.dx());
    Field out(g);
    for (std::size_t i = 0; i < n; ++i) {
        double left, right;
        if (g.bc() == Boundary::Dirichlet) {
            left = i > 0 ? f[i - 1] : 0.0;
            right = i + 1 < n ? f[i + 1] : 0.0;
        } else {
            left = i > 0 ? f[i - 1] : f[1];
            right = i + 1 < n ? f[i + 1] : f[n - 2];
        }
        out[i] = (left - 2.0 * f[i] + right) * s;
    }
    return out;
}

/// Composite trapezoid integral of nodal data.
inline double integrate(const Field& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f.grid.weight(i) * f[i];
    return sum;
}

inline double l2_inner(const Field& f, const Field& g) {
    require_same_grid(f, g, "l2_inner");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f.grid.weight(i) * f[i] * g[i];
    return sum;
}

inline double l2_norm_sq(const Field& f) { return l2_inner(f, f); }
inline double l2_norm(const Field& f) { return std::sqrt(l2_norm_sq(f)); }

/// Squared H1 seminorm from cell differences, i.e. the exact |u'|^2 of the
/// piecewise-linear interpolant. Equals -(Delta_h u, u) under trapezoid weights.
inline double h1_seminorm_sq(const Field& f) {
    const auto& g = f.grid;
    const std::size_t n = f.size();
    double sum = 0.0;
    auto add = [&](double a, double b) { sum += (b - a) * (b - a); };
    if (g.bc() == Boundary::Dirichlet) {
        add(0.0, f[0]);
        for (std::size_t i = 0; i + 1 < n; ++i) add(f[i], f[i + 1]);
        add(f[n - 1], 0.0);
    } else {
        for (std::size_t i = 0; i + 1 < n; ++i) add(f[i], f[i + 1]);
    }
    return sum / g.dx();
}

inline double h1_seminorm(const Field& f) { return std::sqrt(h1_seminorm_sq(f)); }

/// integral of |f|^p
inline double lp_norm_pow(const Field& f, double p) {
    if (!(p >= 2.0)) throw std::invalid_argument("lp_norm: exponent must be >= 2");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f.grid.weight(i) * std::pow(std::abs(f[i]), p);
    return sum;
}

inline double lp_norm(const Field& f, double p) { return std::pow(lp_norm_pow(f, p), 1.0 / p); }

/// Value of the piecewise-linear interpolant at x in [0, L]; Dirichlet ends are zero.
inline double interpolate(const Field& f, double x) {
    const auto& g = f.grid;
    const int n = g.n_cells();
    auto mesh_value = [&](int j) -> double {
        if (g.bc() == Boundary::Dirichlet) return (j == 0 || j == n) ? 0.0 : f[static_cast<std::size_t>(j - 1)];
        return f[static_cast<std::size_t>(j)];
    };
    double s = x / g.dx();
    if (s <= 0.0) return mesh_value(0);
    if (s >= n) return mesh_value(n);
    int j = static_cast<int>(std::floor(s));
    if (j >= n) j = n - 1;
    double theta = s - j;
    return (1.0 - theta) * mesh_value(j) + theta * mesh_value(j + 1);
}

/// Exact integral of the piecewise-linear interpolant over [a, b] within [0, L].
inline double integrate_interpolant(const Field& f, double a, double b) {
    const auto& g = f.grid;
    const double dx = g.dx();
    if (b <= a) return 0.0;
    double sum = 0.0;
    double lo = a;
    while (lo < b) {
        int j = static_cast<int>(std::floor(lo / dx + 1e-12));
        double cell_end = std::min((j + 1) * dx, g.length());
        double hi = std::min(b, cell_end);
        if (hi <= lo) {
            // lo sits on a cell boundary up to rounding
            hi = std::min(b, (j + 2) * dx);
        }
        sum += 0.5 * (hi - lo) * (interpolate(f, lo) + interpolate(f, hi));
        lo = hi;
    }
    return sum;
}

}  // namespace wavestab
