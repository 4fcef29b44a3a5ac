#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cwlo/exact.hpp"
#include "cwlo/oracle.hpp"
#include "cwlo/series.hpp"

using namespace cwlo;

namespace {

double log2n(std::int64_t n) { return static_cast<double>(n) * std::numbers::ln2; }

double rel_gap(double log_a, double log_b) { return std::fabs(std::expm1(log_a - log_b)); }

}  // namespace

TEST(Atoms, MergeAndValidate) {
    const AtomDistribution d =
        AtomDistribution::from_atoms({{1.0, 0.25}, {-1.0, 0.5}, {1.0 + 1e-14, 0.25}, {3.0, 0.0}});
    ASSERT_EQ(d.atoms().size(), 2u);
    EXPECT_DOUBLE_EQ(d.atoms()[1].mass, 0.5);
    EXPECT_THROW(AtomDistribution::from_atoms({{0.0, 0.7}}), UsageError);
    EXPECT_THROW(AtomDistribution::from_atoms({{0.0, -0.1}, {1.0, 1.1}}), UsageError);
}

TEST(Atoms, OpenWindowExcludesDistanceTwo) {
    // Atoms exactly 2 apart cannot share an open window of length 2.
    const AtomDistribution d = AtomDistribution::from_atoms({{-1.0, 0.5}, {1.0, 0.5}});
    EXPECT_DOUBLE_EQ(window_sup(d).sup, 0.5);
    const AtomDistribution e = AtomDistribution::from_atoms({{-0.99, 0.5}, {0.99, 0.5}});
    EXPECT_DOUBLE_EQ(window_sup(e).sup, 1.0);
    EXPECT_NEAR(window_sup(e).witness_x, 0.0, 1e-15);
}

TEST(Atoms, SweepMatchesQuadraticScan) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w(1.0, 3.0);
    std::bernoulli_distribution sign(0.5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 9;
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v) {
            x = sign(rng) ? w(rng) : -w(rng);
        }
        const ModelParams p(1, 0.2 + 0.05 * (trial % 10), trial % 3 == 0 ? 0.3 : 0.0);
        const AtomDistribution d = spin_sum_distribution(p, v);
        EXPECT_NEAR(window_sup(d).sup, window_sup_quadratic(d).sup, 1e-14);
    }
}

TEST(Enumeration, ParallelMatchesSerialAndGrouped) {
    const ModelParams p(1, 0.8, -0.3);
    const std::vector<double> v = {1.0, 1.0, 1.5, -2.0, 1.5, 1.0, -2.0};
    const AtomDistribution a = spin_sum_distribution(p, v);
    const AtomDistribution b = serial::spin_sum_distribution(p, v);
    const std::vector<WeightType> types = {{1.0, 3}, {1.5, 2}, {-2.0, 2}};
    const AtomDistribution c = grouped_spin_sum_distribution(p, types);
    ASSERT_EQ(a.atoms().size(), b.atoms().size());
    ASSERT_EQ(a.atoms().size(), c.atoms().size());
    for (std::size_t i = 0; i < a.atoms().size(); ++i) {
        EXPECT_NEAR(a.atoms()[i].location, b.atoms()[i].location, 1e-13);
        EXPECT_NEAR(a.atoms()[i].mass, b.atoms()[i].mass, 1e-15);
        EXPECT_NEAR(a.atoms()[i].mass, c.atoms()[i].mass, 1e-14);
    }
}

TEST(BruteForceSup, Examples) {
    for (const ModelParams& p : {ModelParams(1, 0.3, 0.0), ModelParams(1, 1.0, 0.2)}) {
        const std::vector<double> ones(4, 1.0);
        EXPECT_NEAR(brute_force_sup(p, ones).sup, qn_plus_exact(p, 4).probability, 1e-14);
    }
    const ModelParams low(1, 1.0, 0.0);
    const std::vector<double> balanced = {1.0, 1.0, -1.0, -1.0};
    const WindowSup s = brute_force_sup(low, balanced);
    EXPECT_NEAR(s.sup, qn_even_exact(low, 4).probability, 1e-14);
    EXPECT_NEAR(s.sup, 0.82659696, 1e-8);
    EXPECT_NEAR(s.witness_x, 0.0, 1e-12);
    const std::vector<double> mixed = {1.0, 1.5, 2.0, -3.0};
    EXPECT_LE(brute_force_sup(ModelParams(1, 0.0, 0.0), mixed).sup, 0.375 + 1e-15);
    EXPECT_THROW(brute_force_sup(low, std::vector<double>(17, 1.0)), UsageError);
    EXPECT_THROW(brute_force_sup(low, std::vector<double>{0.5, 1.0}), UsageError);
}

TEST(BruteForceQn, Examples) {
    const std::vector<double> g12 = {1.0, 2.0};
    const QnSearchResult a = brute_force_qn(ModelParams(1, 1.0, 0.0), 4, g12);
    EXPECT_NEAR(a.best, 0.82659696, 1e-8);
    EXPECT_EQ(a.best_v, (std::vector<double>{1.0, 1.0, -1.0, -1.0}));
    const std::vector<double> g1 = {1.0};
    EXPECT_NEAR(brute_force_qn(ModelParams(1, 0.0, 0.0), 4, g1).best, 0.375, 1e-15);
    const std::vector<double> g15 = {1.0, 1.5};
    const ModelParams f(1, 0.3, 0.2);
    const QnSearchResult c = brute_force_qn(f, 6, g15);
    EXPECT_EQ(c.best_v, (std::vector<double>{1.0, 1.0, 1.0, -1.0, -1.0, -1.0}));
    EXPECT_NEAR(c.best, qn_even_exact(f, 6).probability, 1e-14);
    EXPECT_LE(c.max_excess, 1e-12);
    EXPECT_THROW(brute_force_qn(f, 13, g1), UsageError);
}

TEST(BruteForceQn, PositiveModeFindsAllOnes) {
    const std::vector<double> grid = {1.0, 1.25, 2.0};
    for (int n : {3, 6, 9}) {
        const ModelParams p(1, 0.6, 0.1);
        const QnSearchResult r = brute_force_qn(p, n, grid, SignMode::Positive);
        EXPECT_EQ(r.best_v, std::vector<double>(static_cast<std::size_t>(n), 1.0));
        EXPECT_NEAR(r.best, qn_plus_exact(p, n).probability, 1e-14);
    }
}

TEST(Graphs, ShiftExamples) {
    const UnimodalWeights q({0.25, 0.5, 0.25});
    const ShiftMax a = parallel_shift_max(q, q);
    EXPECT_DOUBLE_EQ(a.max, 0.375);
    EXPECT_EQ(a.d, 0);
    EXPECT_DOUBLE_EQ(noncrossing_bruteforce(q, q), 0.375);
    const UnimodalWeights one({1.0});
    EXPECT_DOUBLE_EQ(parallel_shift_max(one, one).max, 1.0);
    EXPECT_EQ(parallel_shift_max(one, one).d, 0);

    const UnimodalWeights f({1.0, 0.0, 0.0});
    const UnimodalWeights g({0.0, 0.0, 1.0});
    EXPECT_DOUBLE_EQ(noncrossing_bruteforce(f, g), 1.0);
    EXPECT_EQ(parallel_shift_max(f, g).d, -2);

    EXPECT_THROW(UnimodalWeights({1.0, 0.0, 1.0}), UsageError);
    EXPECT_THROW(noncrossing_bruteforce(UnimodalWeights(std::vector<double>(10, 1.0)), one),
                 UsageError);
}

TEST(Graphs, BinomialBlocksMatchBernoulliSplit) {
    // Blocks of sizes 2 and 1 at p = 0.9: max over shifts equals Q_{3,p} at ℓ = 2.
    const UnimodalWeights f(binomial_pmf(2, 0.9));
    const UnimodalWeights g(binomial_pmf(1, 0.9));
    const ShiftMax s = parallel_shift_max(f, g);
    EXPECT_NEAR(s.max, 0.81 * 0.9 + 0.18 * 0.1, 1e-15);
    EXPECT_NEAR(s.max, bernoulli_qnp(3, 0.9).probability, 1e-15);
}

TEST(Graphs, SeededPropertyAgreement) {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> size(1, 7);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    auto draw = [&] {
        const int n = size(rng);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v) {
            x = val(rng);
        }
        const int peak = std::uniform_int_distribution<int>(0, n - 1)(rng);
        std::sort(v.begin(), v.begin() + peak + 1);
        std::sort(v.begin() + peak + 1, v.end(), std::greater<>());
        v[static_cast<std::size_t>(peak)] = *std::max_element(v.begin(), v.end());
        return v;
    };
    for (int t = 0; t < 200; ++t) {
        const std::vector<double> a = draw();
        const std::vector<double> b = draw();
        const UnimodalWeights f(a), g(b);
        const double dp = noncrossing_bruteforce(f, g);
        EXPECT_NEAR(dp, parallel_shift_max(f, g).max, 1e-14);
        EXPECT_NEAR(dp, noncrossing_exhaustive(a, b), 1e-14);
    }
}

TEST(Fit, SyntheticPowerLaws) {
    std::vector<std::pair<double, double>> exact, dominated;
    for (int k = 4; k <= 12; ++k) {
        const double n = std::ldexp(1.0, k);
        exact.emplace_back(n, 3.0 * std::pow(n, -1.5));
        dominated.emplace_back(n, (1.0 + 1.0 / n) / n);
    }
    const PowerLawFit a = fit_power_law(exact);
    EXPECT_NEAR(a.slope, -1.5, 1e-9);
    EXPECT_NEAR(a.intercept, std::log(3.0), 1e-9);
    const double s = fit_power_law(dominated).slope;
    EXPECT_GT(s, -1.1);
    EXPECT_LT(s, -1.0);
    EXPECT_THROW(fit_power_law(std::vector<std::pair<double, double>>(exact.begin(), exact.begin() + 3)),
                 UsageError);
    std::vector<std::pair<double, double>> bad = exact;
    bad[2].second = 0.0;
    EXPECT_THROW(fit_power_law(bad), UsageError);
}

TEST(Fit, HighTempQnResidualSlope) {
    const ModelParams p(1, 0.3, 0.0);
    const double h0 = qn_coeffs(p, 0).values[0];
    std::vector<std::pair<double, double>> samples;
    for (int k = 8; k <= 16; ++k) {
        const std::int64_t n = std::int64_t{1} << k;
        const double nd = static_cast<double>(n);
        samples.emplace_back(nd, std::fabs(qn_even_exact(p, n).probability - h0 / std::sqrt(nd)));
    }
    EXPECT_NEAR(fit_power_law(samples).slope, -1.5, 0.15);
}

TEST(Quadrature, SmallN) {
    const ModelParams p(1, 0.25, 0.0);
    EXPECT_NEAR(4.0 * std::exp(quad_Z_of_x(p, 1.0 / std::sqrt(2.0))), 2.0 + 2.0 * std::exp(0.5),
                1e-8);
    EXPECT_THROW(quad_Z_of_x(ModelParams(1, 0.0, 0.0), 0.1), DomainError);
    EXPECT_THROW(quad_W(p, -1.0), DomainError);
}

TEST(Quadrature, MatchesExactSums) {
    struct Case {
        ModelParams p;
        std::int64_t n;
        double tol;
    };
    for (const Case& c : {Case{ModelParams(1, 0.3, 0.0), 1000, 1e-8},
                          Case{ModelParams(1, 1.0, 0.0), 500, 1e-7},
                          Case{ModelParams(2, 0.4, -0.3), 300, 1e-8}}) {
        const double x = 1.0 / std::sqrt(static_cast<double>(c.n));
        EXPECT_LE(rel_gap(log2n(c.n) + quad_Z_of_x(c.p, x),
                          static_cast<double>(log_partition(c.p, c.n).log_value)),
                  c.tol);
    }
    const ModelParams p(1, 0.3, 0.0);
    EXPECT_LE(rel_gap(log2n(200) + quad_W(p, 1.0 / std::sqrt(200.0)),
                      static_cast<double>(log_O_even(p, 200).log_value)),
              1e-6);
    const ModelParams small(1, 0.05, 0.0);
    EXPECT_LE(rel_gap(log2n(100) + quad_W(small, 0.1),
                      static_cast<double>(log_O_even(small, 100).log_value)),
              1e-6);
    EXPECT_LE(rel_gap(log2n(201) + quad_W_odd(p, 1.0 / std::sqrt(201.0)),
                      static_cast<double>(log_O_odd(p, 201).log_value)),
              1e-6);
}

TEST(Quadrature, FieldSignDoesNotMatter) {
    const ModelParams p(1, 0.7, 0.15);
    const double x = 1.0 / std::sqrt(400.0);
    EXPECT_NEAR(quad_Z_of_x(p, x), quad_Z_of_x(p.with_h(-0.15), x), 1e-12);
    EXPECT_NEAR(quad_W_odd(p, x), quad_W_odd(p.with_h(-0.15), x), 1e-12);
}
