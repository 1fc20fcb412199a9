#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "grid.hpp"

namespace wavestab {

/// Deterministic stream for sample `index` of a seeded sweep.
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform on [lo, hi) from the top 53 bits; identical on every platform.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

/// Coefficients of sum_j s_j sin(j pi x/L) + c_0 + sum_j c_j cos(j pi x/L), j = 1..degree.
struct TrigPolynomial {
    double length = 1.0;
    double c0 = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    double operator()(double x) const {
        double s = c0;
        const double w = std::numbers::pi * x / length;
        for (std::size_t j = 0; j < cos_coeffs.size(); ++j) s += cos_coeffs[j] * std::cos((j + 1) * w);
        for (std::size_t j = 0; j < sin_coeffs.size(); ++j) s += sin_coeffs[j] * std::sin((j + 1) * w);
        return s;
    }

    Field sample(const Grid1D& g) const { return Field::sample(g, *this); }
};

/// Sine series with coefficients uniform in [-1, 1]; vanishes at both ends.
inline TrigPolynomial random_sine_series(std::mt19937_64& rng, double length, int degree) {
    TrigPolynomial p;
    p.length = length;
    for (int j = 0; j < degree; ++j) p.sin_coeffs.push_back(uniform(rng, -1.0, 1.0));
    return p;
}

/// Constant, cosine and sine terms up to `degree`, coefficients uniform in [-1, 1].
inline TrigPolynomial random_fourier_series(std::mt19937_64& rng, double length, int degree) {
    TrigPolynomial p;
    p.length = length;
    p.c0 = uniform(rng, -1.0, 1.0);
    for (int j = 0; j < degree; ++j) p.cos_coeffs.push_back(uniform(rng, -1.0, 1.0));
    for (int j = 0; j < degree; ++j) p.sin_coeffs.push_back(uniform(rng, -1.0, 1.0));
    return p;
}

/// Cosine series (Neumann-compatible) with coefficients uniform in [-1, 1].
inline TrigPolynomial random_cosine_series(std::mt19937_64& rng, double length, int degree) {
    TrigPolynomial p;
    p.length = length;
    p.c0 = uniform(rng, -1.0, 1.0);
    for (int j = 0; j < degree; ++j) p.cos_coeffs.push_back(uniform(rng, -1.0, 1.0));
    return p;
}

}  // namespace wavestab
