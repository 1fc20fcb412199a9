#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "models.hpp"

namespace wavestab {

/// Records below this stabilization norm are at the round-off floor and ignored by fits.
inline constexpr double kFitFloor = 1e-13;

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

/// Default fit window [0.2 t_end, 0.9 t_end] of a record list.
inline Window default_window(std::span<const EnergyRecord> records, double lo_frac = 0.2, double hi_frac = 0.9) {
    if (records.empty()) return {};
    const double t_end = records.back().t;
    return {lo_frac * t_end, hi_frac * t_end};
}

struct DecayFit {
    DecayKind kind = DecayKind::Exponential;
    double rate = 0.0;  // exponential rate, or polynomial exponent
    double amplitude = 0.0;
    double r_squared = 0.0;
    Window window;
    int used = 0;
};

namespace detail {
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - (f.intercept + f.slope * x[i]);
            ss_res += e * e;
        }
        // relative scale keeps round-off in an exact line from pulling r^2 below 1
        f.r_squared = ss_res <= 1e-24 * syy ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return f;
}
}  // namespace detail

/// Least-squares line through (t, ln stab_norm) over the window; rate = -slope.
inline DecayFit fit_exponential(std::span<const EnergyRecord> records, Window window) {
    std::vector<double> t, y;
    for (const auto& r : records) {
        if (r.t < window.lo || r.t > window.hi) continue;
        if (!(r.stab_norm > kFitFloor) || !std::isfinite(r.stab_norm)) continue;
        t.push_back(r.t);
        y.push_back(std::log(r.stab_norm));
    }
    if (t.size() < 20)
        throw std::invalid_argument("fit_exponential: only " + std::to_string(t.size()) +
                                    " usable records in window (need 20)");
    const auto line = detail::least_squares(t, y);
    DecayFit fit;
    fit.rate = -line.slope;
    fit.amplitude = std::exp(line.intercept);
    fit.r_squared = line.r_squared;
    fit.window = window;
    fit.used = static_cast<int>(t.size());
    return fit;
}

inline DecayFit fit_exponential(std::span<const EnergyRecord> records) {
    return fit_exponential(records, default_window(records));
}

/// Least-squares line through (ln t, ln total) over the window; rate = -slope.
inline DecayFit fit_polynomial(std::span<const EnergyRecord> records, Window window) {
    std::vector<double> lt, y;
    for (const auto& r : records) {
        if (r.t < window.lo || r.t > window.hi || r.t <= 0.0) continue;
        if (!(r.total > kFitFloor) || !std::isfinite(r.total)) continue;
        lt.push_back(std::log(r.t));
        y.push_back(std::log(r.total));
    }
    if (lt.size() < 20)
        throw std::invalid_argument("fit_polynomial: only " + std::to_string(lt.size()) +
                                    " usable records in window (need 20)");
    const auto line = detail::least_squares(lt, y);
    DecayFit fit;
    fit.kind = DecayKind::Polynomial;
    fit.rate = -line.slope;
    fit.amplitude = std::exp(line.intercept);
    fit.r_squared = line.r_squared;
    fit.window = window;
    fit.used = static_cast<int>(lt.size());
    return fit;
}

struct ExponentialCheck {
    bool ok = false;
    bool rate_ok = false;
    bool envelope_ok = false;
    DecayFit fitted;
    double envelope_constant = 0.0;
};

/**
 * ok iff the fitted rate is at least safety * target and the pointwise bound
 * stab_norm(t) <= C exp(-safety * target * t) holds over the window, with C
 * the maximum of stab_norm(t) exp(safety * target * t) over records t <= window.lo.
 */
inline ExponentialCheck verify_exponential(std::span<const EnergyRecord> records, double target, double safety,
                                           Window window) {
    if (!(safety > 0.0 && safety <= 1.0)) throw std::invalid_argument("verify_exponential: safety must lie in (0, 1]");
    ExponentialCheck r;
    r.fitted = fit_exponential(records, window);
    const double rate = safety * target;
    r.rate_ok = r.fitted.rate >= rate;
    double c = 0.0;
    for (const auto& rec : records)
        if (rec.t <= window.lo) c = std::max(c, rec.stab_norm * std::exp(rate * rec.t));
    r.envelope_constant = c;
    r.envelope_ok = true;
    for (const auto& rec : records) {
        if (rec.t < window.lo || rec.t > window.hi || !(rec.stab_norm > kFitFloor)) continue;
        if (rec.stab_norm * std::exp(rate * rec.t) > c) {
            r.envelope_ok = false;
            break;
        }
    }
    r.ok = r.rate_ok && r.envelope_ok;
    return r;
}

inline ExponentialCheck verify_exponential(std::span<const EnergyRecord> records, double target, double safety) {
    return verify_exponential(records, target, safety, default_window(records));
}

struct PolynomialCheck {
    bool ok = false;
    double sup_ratio = 0.0;
    double first_quarter_sup = 0.0;
    double last_quarter_sup = 0.0;
};

/// Sup of total(t) t^alpha over the first and last quarters of the window;
/// ok iff last <= 1.1 first.
inline PolynomialCheck verify_polynomial(std::span<const EnergyRecord> records, double alpha, Window window) {
    if (window.lo < 1.0) throw std::invalid_argument("verify_polynomial: window must start at t >= 1");
    if (!(window.hi > window.lo)) throw std::invalid_argument("verify_polynomial: empty window");
    const double q = 0.25 * (window.hi - window.lo);
    PolynomialCheck r;
    bool first_seen = false, last_seen = false;
    for (const auto& rec : records) {
        if (rec.t < window.lo || rec.t > window.hi) continue;
        const double g = rec.total * std::pow(rec.t, alpha);
        if (rec.t <= window.lo + q) {
            r.first_quarter_sup = first_seen ? std::max(r.first_quarter_sup, g) : g;
            first_seen = true;
        }
        if (rec.t >= window.hi - q) {
            r.last_quarter_sup = last_seen ? std::max(r.last_quarter_sup, g) : g;
            last_seen = true;
        }
    }
    if (!first_seen || !last_seen) throw std::invalid_argument("verify_polynomial: window quarters hold no records");
    r.sup_ratio = r.first_quarter_sup > 0.0 ? r.last_quarter_sup / r.first_quarter_sup
                                            : std::numeric_limits<double>::infinity();
    if (r.last_quarter_sup <= 0.0) r.sup_ratio = 0.0;
    r.ok = r.last_quarter_sup <= 1.1 * r.first_quarter_sup;
    return r;
}

}  // namespace wavestab
