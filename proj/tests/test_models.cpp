#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "wavestab/models.hpp"
#include "wavestab/random_fields.hpp"
#include "wavestab/spectral.hpp"

using namespace wavestab;
constexpr double pi = std::numbers::pi;

TEST(Acceleration, ZeroStateIsZero) {
    const auto g = make_grid(pi, 64, Boundary::Dirichlet);
    ModelSpec m;
    m.a = 1.0;
    m.nonlinearity = Nonlinearity::power_law(4);
    for (double x : acceleration(State::zero(g), m, Field(g)).values) EXPECT_EQ(x, 0.0);
}

TEST(Acceleration, FirstModeOfLaplacian) {
    const auto g = make_grid(pi, 400, Boundary::Dirichlet);
    const auto w1 = EigenBasis(pi, 1).sample(1, g);
    ModelSpec m;
    m.b = 0.0;
    const auto acc = acceleration(State(w1, Field(g)), m, Field(g));
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(acc[i], -w1[i], 1e-5);
}

TEST(Acceleration, NonlinearDampingOfUnitVelocity) {
    const auto g = make_grid(pi, 32, Boundary::Dirichlet);
    ModelSpec m;
    m.family = Family::NonlinearDampingWave;
    m.m = 3;
    m.b = 2;
    m.nonlinearity = Nonlinearity::power_law(4);
    const auto acc = acceleration(State(Field(g), Field::sample(g, [](double) { return 1.0; })), m, Field(g));
    for (double x : acc.values) EXPECT_NEAR(x, -2.0, 1e-14);
}

TEST(Acceleration, HomogeneousWhenLinear) {
    const auto g = make_grid(2.0, 64, Boundary::Neumann);
    ModelSpec m;
    m.bc = Boundary::Neumann;
    m.a = 0.7;
    m.b = 1.3;
    m.nu = 2.0;
    auto rng = sample_stream(1, 0);
    const auto u = random_cosine_series(rng, 2.0, 6).sample(g);
    const auto v = random_cosine_series(rng, 2.0, 6).sample(g);
    const double alpha = -2.5;
    const auto base = acceleration(State(u, v), m, Field(g));
    const auto scaled = acceleration(State(alpha * u, alpha * v), m, Field(g));
    for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_NEAR(scaled[i], alpha * base[i], 1e-12 * std::max(1.0, std::abs(alpha * base[i])));
}

TEST(EnergyRecord, ZeroState) {
    const auto g = make_grid(pi, 32, Boundary::Dirichlet);
    ModelSpec m;
    m.nonlinearity = Nonlinearity::power_law(4);
    const auto r = energy_record(State::zero(g), m, 0.0);
    EXPECT_EQ(r.kinetic, 0.0);
    EXPECT_EQ(r.grad, 0.0);
    EXPECT_EQ(r.quadratic, 0.0);
    EXPECT_EQ(r.lp, 0.0);
    EXPECT_EQ(r.total, 0.0);
    EXPECT_EQ(r.stab_norm, 0.0);
}

TEST(EnergyRecord, FirstMode) {
    const auto g = make_grid(pi, 1024, Boundary::Dirichlet);
    const auto w1 = EigenBasis(pi, 1).sample(1, g);
    ModelSpec m;
    m.nonlinearity = Nonlinearity::power_law(2);
    const auto r = energy_record(State(w1, Field(g)), m, 0.0);
    EXPECT_NEAR(r.grad, 0.5, 1e-5);
    EXPECT_NEAR(r.lp, 0.5, 1e-5);
    EXPECT_EQ(r.kinetic, 0.0);
    EXPECT_NEAR(energy_record(State(w1, w1), m, 0.0).stab_norm, 2.0, 1e-5);
}

TEST(ConditionF, AcceptsCubicRejectsNegativeLinear) {
    EXPECT_TRUE(check_condition_f(Nonlinearity::power_law(4)).ok);
    EXPECT_TRUE(check_condition_f(Nonlinearity::zero()).ok);
    const auto neg = Nonlinearity::custom([](double s) { return -s; }, [](double s) { return -0.5 * s * s; });
    EXPECT_FALSE(check_condition_f(neg).ok);
}

TEST(ModelSpec, Validation) {
    ModelSpec m;
    m.nu = 0.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m.nu = 1.0;
    m.family = Family::StronglyDampedWave;
    m.bc = Boundary::Neumann;
    m.nonlinearity = Nonlinearity::power_law(4);
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m.bc = Boundary::Dirichlet;
    EXPECT_NO_THROW(m.validate());
    m.family = Family::NonlinearDampingWave;
    m.m = 2.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    EXPECT_THROW(Nonlinearity::power_law(1.5), std::invalid_argument);
}
