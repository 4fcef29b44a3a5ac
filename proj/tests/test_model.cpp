#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cwlo/model.hpp"
#include "cwlo/parallel.hpp"

using namespace cwlo;

TEST(ModelParams, RejectsBadInputs) {
    EXPECT_THROW(ModelParams(0, 0.3, 0.0), DomainError);
    EXPECT_THROW(ModelParams(1, -0.1, 0.0), DomainError);
    EXPECT_THROW(ModelParams(1, NAN, 0.0), DomainError);
    EXPECT_THROW(ModelParams(1, 0.3, INFINITY), DomainError);
    EXPECT_NO_THROW(ModelParams(3, 0.0, -2.0));
}

TEST(ModelParams, CriticalBetaIsExact) {
    EXPECT_EQ(beta_critical(1), 0.5);
    EXPECT_EQ(beta_critical(2), 0.25);
    EXPECT_EQ(beta_critical(10), 0.05);
    EXPECT_EQ(ModelParams(4, 0.1, 0.0).beta_c(), 1.0 / 8.0);
}

TEST(Regime, Classification) {
    EXPECT_EQ(classify_regime(ModelParams(1, 0.3, 0.0)), Regime::HighTemp);
    EXPECT_EQ(classify_regime(ModelParams(1, 0.5, 0.0)), Regime::Critical);
    EXPECT_EQ(classify_regime(ModelParams(1, 1.0, 0.0)), Regime::LowTemp);
    EXPECT_EQ(classify_regime(ModelParams(1, 0.3, 0.1)), Regime::Field);
    EXPECT_EQ(classify_regime(ModelParams(2, 0.25 + 1e-13, 0.0)), Regime::Critical);
    for (Regime r : {Regime::HighTemp, Regime::Critical, Regime::LowTemp, Regime::Field}) {
        EXPECT_EQ(parse_regime(to_string(r)), r);
    }
    EXPECT_FALSE(parse_regime("Tepid").has_value());
}

TEST(Scalars, Phi) {
    const ModelParams p(1, 0.25, 0.0);
    EXPECT_DOUBLE_EQ(phi(p, 0.0), 0.0);
    // mpmath: ln cosh 1 - 1.
    EXPECT_NEAR(phi(p, 1.0), -0.566219169516973, 1e-15);
    EXPECT_NEAR(phi(ModelParams(1, 0.5, 1.0), 1.0), std::log(std::cosh(1.0)), 1e-15);
    EXPECT_THROW(phi(ModelParams(1, 0.0, 0.0), 0.1), DomainError);
    // Large t must not overflow.
    EXPECT_TRUE(std::isfinite(phi(p, 800.0)));
}

TEST(Scalars, PsiAndRho) {
    const ModelParams p(1, 0.25, 0.0);
    for (double t : {-1.0, 0.0, 0.4, 2.5}) {
        EXPECT_NEAR(psi(p, t, 0.0), phi(p, t), 1e-14);
    }
    EXPECT_NEAR(psi(p, 0.0, std::numbers::pi / 2), 0.5 * std::log(0.5), 1e-15);
    EXPECT_NEAR(psi(p, 0.3, 0.2), -0.0502406079867436, 1e-14);
    // The double nearest pi sits just off the singular node, so psi is huge and negative there.
    EXPECT_LT(psi(p, 0.0, std::numbers::pi), -30.0);

    EXPECT_DOUBLE_EQ(rho(0.0, 0.0), 1.0);
    EXPECT_NEAR(rho(1.5, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(rho(0.5, 1.0), 0.733534357566193, 1e-14);
    EXPECT_TRUE(std::isfinite(rho(0.0, std::numbers::pi)));
}

TEST(Scalars, EntropyAndFreeEnergy) {
    EXPECT_NEAR(entropy_density(0.0), std::numbers::ln2, 1e-15);
    EXPECT_EQ(entropy_density(1.0), 0.0);
    EXPECT_EQ(entropy_density(-1.0), 0.0);
    EXPECT_NEAR(entropy_density(0.5), 0.562335144618808, 1e-15);
    EXPECT_THROW(entropy_density(1.5), DomainError);

    EXPECT_NEAR(free_energy(ModelParams(1, 0.3, 0.0), 0.0), -std::numbers::ln2, 1e-15);
    EXPECT_EQ(free_energy(ModelParams(1, 0.0, 0.0), 1.0), 0.0);
    EXPECT_EQ(free_energy(ModelParams(1, 0.0, 0.0), -1.0), 0.0);
}

TEST(MeanField, HighTempIsZero) {
    const MeanFieldSolution s = solve_mean_field(ModelParams(1, 0.3, 0.0));
    EXPECT_EQ(s.z_star, 0.0);
    EXPECT_EQ(s.t_star, 0.0);
}

TEST(MeanField, LowTempRoot) {
    const ModelParams p(1, 1.0, 0.0);
    const MeanFieldSolution s = solve_mean_field(p);
    EXPECT_NEAR(s.z_star, 0.957504024077269, 1e-14);
    EXPECT_NEAR(s.t_star, 2.0 * s.z_star, 1e-15);
    ASSERT_EQ(s.all_solutions.size(), 3u);
    EXPECT_NEAR(s.all_solutions.front(), -s.z_star, 1e-14);
    EXPECT_NEAR(-free_energy(p, s.z_star), std::numbers::ln2 + phi(p, s.t_star), 1e-13);
}

TEST(MeanField, FieldRootAndSymmetry) {
    const MeanFieldSolution s = solve_mean_field(ModelParams(1, 0.3, 0.2));
    EXPECT_NEAR(s.z_star, 0.426964764566256, 1e-14);
    EXPECT_NEAR(s.t_star, 0.6 * s.z_star + 0.2, 1e-15);
    const MeanFieldSolution m = solve_mean_field(ModelParams(1, 0.3, -0.2));
    EXPECT_EQ(m.z_star, s.z_star);
}

TEST(MeanField, PostconditionsOnGrid) {
    for (int d : {1, 2, 5}) {
        for (double kappa : {0.0, 0.3, 0.99, 1.0, 1.01, 2.0, 6.0}) {
            for (double h : {0.0, 0.01, -0.3, 2.0}) {
                const ModelParams p(d, kappa / (2.0 * d), h);
                const MeanFieldSolution s = solve_mean_field(p);
                EXPECT_LE(std::fabs(s.z_star - std::tanh(p.kappa() * s.z_star + p.abs_h())), 1e-13);
                EXPECT_NEAR(s.t_star, p.kappa() * s.z_star + p.abs_h(), 1e-15);
                for (double z : s.all_solutions) {
                    EXPECT_LE(z, s.z_star);
                }
            }
        }
    }
}

TEST(MeanField, ThreeRootsAboveBetaZero) {
    const double h = 0.05;
    const double b0 = beta_zero(1, h);
    EXPECT_GT(b0, 0.5);
    EXPECT_EQ(solve_mean_field(ModelParams(1, 0.98 * b0, h)).all_solutions.size(), 1u);
    EXPECT_EQ(solve_mean_field(ModelParams(1, 1.02 * b0, h)).all_solutions.size(), 3u);
}

TEST(Parallel, LogSumExpIsThreadIndependent) {
    auto term = [](std::int64_t i) { return std::sin(0.001L * i) * 40.0L; };
    const long double a = parallel_log_sum_exp(200000, term);
    long double m = -INFINITY;
    for (std::int64_t i = 0; i < 200000; ++i) {
        m = std::max(m, term(i));
    }
    long double s = 0.0L;
    for (std::int64_t i = 0; i < 200000; ++i) {
        s += std::exp(term(i) - m);
    }
    EXPECT_NEAR(static_cast<double>(a), static_cast<double>(m + std::log(s)), 1e-12);
}
