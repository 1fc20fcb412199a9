#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "wavestab/random_fields.hpp"
#include "wavestab/spectral.hpp"

using namespace wavestab;
constexpr double pi = std::numbers::pi;

TEST(EigenBasis, ProjectFirstMode) {
    const auto g = make_grid(pi, 256, Boundary::Dirichlet);
    const EigenBasis b(pi, 5);
    const auto c = project_modes(b.sample(1, g), b, 5);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(c[k], k == 0 ? 1.0 : 0.0, 1e-6);
}

TEST(EigenBasis, ProjectCombination) {
    const auto g = make_grid(pi, 256, Boundary::Dirichlet);
    const EigenBasis b(pi, 5);
    const Field f = 3.0 * b.sample(2, g) + 0.5 * b.sample(5, g);
    const auto c = project_modes(f, b, 5);
    const double want[] = {0, 3, 0, 0, 0.5};
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(c[k], want[k], 1e-6);
}

TEST(EigenBasis, ProjectZero) {
    const auto g = make_grid(pi, 64, Boundary::Dirichlet);
    for (double c : project_modes(Field(g), EigenBasis(pi, 3), 3)) EXPECT_EQ(c, 0.0);
}

TEST(EigenBasis, GramMatrixIsIdentity) {
    const double length = 1.3;
    const auto g = make_grid(length, 512, Boundary::Dirichlet);
    const EigenBasis b(length, 8);
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j)
            EXPECT_NEAR(l2_inner(b.sample(i, g), b.sample(j, g)), i == j ? 1.0 : 0.0, 1e-6);
}

TEST(EigenBasis, Eigenvalues) {
    const EigenBasis b(pi, 3);
    EXPECT_DOUBLE_EQ(b.eigenvalue(1), 1.0);
    EXPECT_NEAR(b.eigenvalue(4), 16.0, 1e-12);
    EXPECT_THROW(b.eigenvalue(5), std::out_of_range);
}

TEST(TailBound, FirstModeHasNoTail) {
    const auto g = make_grid(pi, 256, Boundary::Dirichlet);
    const EigenBasis b(pi, 3);
    const auto r = tail_bound_check(b.sample(1, g), b, 1);
    EXPECT_NEAR(r.lhs, 0.0, 1e-10);
    EXPECT_TRUE(r.ok);
}

TEST(TailBound, ThirdMode) {
    const auto g = make_grid(pi, 1024, Boundary::Dirichlet);
    const EigenBasis b(pi, 3);
    const auto r = tail_bound_check(b.sample(3, g), b, 1);
    EXPECT_NEAR(r.lhs, 1.0, 1e-6);
    EXPECT_NEAR(r.rhs, 9.0 / 4.0, 1e-3);
    EXPECT_TRUE(r.ok);
}

TEST(TailBound, RandomTrigPolynomials) {
    const auto g = make_grid(pi, 512, Boundary::Dirichlet);
    const EigenBasis b(pi, 6);
    for (int i = 0; i < 1000; ++i) {
        auto rng = sample_stream(3, i);
        const auto f = random_sine_series(rng, pi, 12).sample(g);
        for (int n = 1; n <= 6; ++n) EXPECT_TRUE(tail_bound_check(f, b, n).ok) << "sample " << i << " N " << n;
    }
}

TEST(Complement, Examples) {
    EXPECT_NEAR(complement_eigenvalue(1.0, {0.4, 0.6}), 61.685, 1e-3);
    EXPECT_NEAR(complement_eigenvalue(1.0, {0.5, 0.9}), 39.478, 1e-3);
    EXPECT_NEAR(complement_eigenvalue(pi, {pi / 3, 2 * pi / 3}), 9.0, 1e-12);
}

// Dense eigensolve of the discrete Dirichlet Laplacian on one component.
double dense_dirichlet_min(double length, int cells) {
    const int n = cells - 1;
    const double h = length / cells;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 2.0 / (h * h);
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = -1.0 / (h * h);
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

TEST(Complement, MatchesDiscreteLaplacianOnComponents) {
    const double length = 1.0;
    const int cells = 1024;
    for (Subdomain w : {Subdomain{0.4, 0.6}, Subdomain{0.5, 0.9}, Subdomain{0.125, 0.25}}) {
        const int left = static_cast<int>(std::lround(w.lo * cells));
        const int right = cells - static_cast<int>(std::lround(w.hi * cells));
        const double numeric = std::min(dense_dirichlet_min(w.lo, left), dense_dirichlet_min(length - w.hi, right));
        EXPECT_NEAR(complement_eigenvalue(length, w), numeric, 0.02 * numeric);
    }
}

TEST(PenalizedOperator, SturmBisectionMatchesEigen) {
    const auto g = make_grid(1.0, 200, Boundary::Dirichlet);
    const Subdomain w{0.3, 0.55};
    for (double mu : {0.0, 10.0, 1e3}) {
        const auto t = penalized_laplacian(g, w, mu);
        const int n = static_cast<int>(t.diag.size());
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            m(i, i) = t.diag[i];
            if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = t.off[i];
        }
        const double want = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
        EXPECT_NEAR(penalized_min_eigenvalue(g, w, mu), want, 1e-9 * want);
    }
}

TEST(PenalizedOperator, MonotoneAndBoundedInMu) {
    const auto g = make_grid(1.0, 512, Boundary::Dirichlet);
    const Subdomain w{0.4, 0.6};
    const double cap = complement_eigenvalue(1.0, w);
    double prev = -1.0;
    for (double mu : {0.0, 10.0, 1e2, 1e3, 1e4}) {
        const double lam = penalized_min_eigenvalue(g, w, mu);
        EXPECT_GE(lam, prev);
        EXPECT_LE(lam, cap * 1.01);
        prev = lam;
    }
}

TEST(MuZero, ZeroWhenAlreadySatisfied) {
    const auto g = make_grid(1.0, 256, Boundary::Dirichlet);
    const Subdomain w{0.4, 0.6};
    const double d = complement_eigenvalue(1.0, w) - pi * pi;
    EXPECT_LE(mu_zero(1.0, w, d, g), 1e-2);
    EXPECT_EQ(mu_zero(1.0, w, d + 1.0, g), 0.0);
}

TEST(MuZero, PostHocCertificate) {
    const auto g = make_grid(1.0, 256, Boundary::Dirichlet);
    const Subdomain w{0.4, 0.6};
    const double lam = complement_eigenvalue(1.0, w);
    const double d = lam / 2;
    const double mu0 = mu_zero(1.0, w, d, g);
    ASSERT_GT(mu0, 0.0);
    EXPECT_GE(penalized_min_eigenvalue(g, w, mu0), lam - d);
    EXPECT_LT(penalized_min_eigenvalue(g, w, 0.9 * mu0), lam - d);
}

TEST(MuZero, RejectsBadInput) {
    const auto g = make_grid(1.0, 64, Boundary::Dirichlet);
    const Subdomain w{0.4, 0.6};
    EXPECT_THROW(mu_zero(1.0, w, -1.0, g), std::invalid_argument);
    EXPECT_THROW(mu_zero(1.0, w, 1e6, g), std::invalid_argument);
    EXPECT_THROW(mu_zero(1.0, w, 10.0, make_grid(1.0, 64, Boundary::Neumann)), std::invalid_argument);
    EXPECT_THROW(mu_zero(1.0, Subdomain{0.6, 0.4}, 10.0, g), std::invalid_argument);
}
