#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cwlo/exact.hpp"
#include "cwlo/series.hpp"

using namespace cwlo;

namespace {

const double kPi = std::numbers::pi;

// Reference ladders from tests/oracles/frozen_values.py (mpmath, 40 digits).
struct Frozen {
    ModelParams params;
    std::vector<double> e;
    std::vector<double> gamma;
    std::vector<double> h;
};

const std::vector<Frozen>& frozen() {
    static const std::vector<Frozen> v = {
        {ModelParams(1, 0.3, 0.0),
         {1.58113883008419, -0.889390591922357, 4.69709406358995, -44.7387787010943, 623.029916432},
         {1.26156626101008, -0.07884789131313, 2.36790073599744},
         {0.797884560802865, 0.398942280401433, -0.648281205652328}},
        {ModelParams(1, 0.5, 0.0),
         {1.34603532240803, 0.315195345656255, -0.00480726900860011, -0.013133139402344,
          0.00715830449809828},
         {1.07398080204468, 0.88021324977617, 0.398907155045165},
         {0.797884560802865, 0.467093054226354, 0.189829523662965}},
        {ModelParams(1, 1.0, 0.0),
         {2.19050309861422, 0.618909607310082, 2.51983180534915, 16.3351272537675, 154.443306522889},
         {6.05980568112746, 38.1995565326995, 1187.01330858094},
         {2.76639904548004, 16.657089236204, 534.002082198265}},
        {ModelParams(1, 0.3, 0.2),
         {1.40113291082122, 0.0525296893300765, -1.38379143968233, 4.56802802019488, 38.5819408372298},
         {1.23629498462787, 0.347510711411511, 0.848543996895087},
         {0.882353826021591, 0.214941021458756, 1.4689876079114}},
    };
    return v;
}

void expect_rel(double actual, double expected, double rel) {
    EXPECT_NEAR(actual, expected, rel * std::fabs(expected)) << "expected " << expected;
}

}  // namespace

TEST(Rational, ArithmeticAndFormat) {
    EXPECT_EQ(Rational(2, -4).str(), "-1/2");
    EXPECT_EQ(Rational(6, 3).str(), "2");
    EXPECT_EQ(Rational(1, 4) + Rational(1, 4), Rational(1, 2));
    EXPECT_EQ(Rational(-1, 4) - Rational(1, 2), Rational(-3, 4));
    EXPECT_TRUE(Rational(-3, 4) < Rational(-1, 2));
    EXPECT_EQ(Rational::parse("-3/4"), Rational(-3, 4));
    EXPECT_EQ(Rational::parse("5"), Rational(5));
    EXPECT_THROW(Rational(1, 0), UsageError);
    EXPECT_THROW(Rational::parse("1/x"), UsageError);
}

TEST(Taylor, CriticalPhi) {
    const UniSeries s = taylor_phi_at(ModelParams(1, 0.5, 0.0), 0.0, 8);
    EXPECT_NEAR(s.coeffs[2], 0.0, 1e-15);
    EXPECT_NEAR(s.coeffs[4], -1.0 / 12.0, 1e-15);
    EXPECT_NEAR(s.coeffs[6], 1.0 / 45.0, 1e-15);
    EXPECT_NEAR(s.coeffs[8], -17.0 / 2520.0, 1e-15);
}

TEST(Taylor, StationaryAtTStar) {
    for (const ModelParams& p : {ModelParams(1, 1.0, 0.0), ModelParams(1, 0.3, 0.2),
                                 ModelParams(3, 0.9, -0.4)}) {
        const double t = solve_mean_field(p).t_star;
        const UniSeries s = taylor_phi_at(p, t, 6);
        EXPECT_LE(std::fabs(s.coeffs[1]), 1e-10);
        const double c2 = 1.0 / std::pow(std::cosh(t), 2);
        EXPECT_NEAR(2.0 * s.coeffs[2], c2 - 1.0 / (2.0 * p.coupling()), 1e-13);
        EXPECT_LT(s.coeffs[2], 0.0);
    }
}

TEST(Taylor, HighOrderLogCoshMatchesFiniteSeries) {
    // ln cosh t = t²/2 - t⁴/12 + t⁶/45 - 17t⁸/2520 + ...; compare the full order-24
    // polynomial against the function near 0.
    const std::vector<double> a = log_cosh_taylor(0.0, kMaxPhiOrder);
    for (double t : {0.05, 0.2, 0.4}) {
        double s = 0.0;
        for (int k = kMaxPhiOrder; k >= 0; --k) {
            s = s * t + a[static_cast<std::size_t>(k)];
        }
        EXPECT_NEAR(s, std::log(std::cosh(t)), 1e-15);
    }
    EXPECT_THROW(log_cosh_taylor(0.0, kMaxPhiOrder + 1), UsageError);
}

TEST(Taylor, PsiCritical) {
    const BiSeries s = taylor_psi_at(ModelParams(1, 0.5, 0.0), 0.0, 6);
    EXPECT_NEAR(s.at(0, 2), -1.0 / 8.0, 1e-15);
    EXPECT_NEAR(s.at(4, 0), -1.0 / 12.0, 1e-15);
    EXPECT_NEAR(s.at(2, 2), 1.0 / 8.0, 1e-15);
    EXPECT_NEAR(s.at(6, 0), 1.0 / 45.0, 1e-15);
}

TEST(Taylor, PsiNonCriticalAndSlice) {
    for (const ModelParams& p : {ModelParams(1, 1.0, 0.0), ModelParams(1, 0.3, 0.2)}) {
        const double t = solve_mean_field(p).t_star;
        const BiSeries s = taylor_psi_at(p, t, 8);
        EXPECT_NEAR(s.at(1, 1), 0.0, 1e-15);
        EXPECT_NEAR(2.0 * s.at(0, 2), -0.25 / std::pow(std::cosh(t), 2), 1e-14);
        const UniSeries phi_s = taylor_phi_at(p, t, 8);
        for (int k = 0; k <= 8; ++k) {
            EXPECT_NEAR(s.at(k, 0), phi_s.coeffs[static_cast<std::size_t>(k)], 1e-12) << k;
        }
    }
}

TEST(Coefficients, FrozenLadders) {
    for (const Frozen& f : frozen()) {
        SCOPED_TRACE(to_string(classify_regime(f.params)));
        const ExpansionCoeffs e = e_coeffs(f.params, kMaxZOrder);
        const ExpansionCoeffs g = gamma_coeffs(f.params, kMaxGammaOrder);
        const ExpansionCoeffs h = qn_coeffs(f.params, kMaxGammaOrder);
        ASSERT_EQ(e.values.size(), f.e.size());
        for (std::size_t i = 0; i < f.e.size(); ++i) {
            expect_rel(e.values[i], f.e[i], 1e-11);
        }
        for (std::size_t i = 0; i < f.gamma.size(); ++i) {
            expect_rel(g.values[i], f.gamma[i], 1e-11);
            expect_rel(h.values[i], f.h[i], 1e-11);
        }
    }
}

TEST(Coefficients, ClosedForms) {
    const double g14 = std::tgamma(0.25);
    const double g34 = std::tgamma(0.75);
    const ModelParams crit(1, 0.5, 0.0);
    const ExpansionCoeffs e = e_coeffs(crit, 1);
    EXPECT_NEAR(e.values[0], std::pow(0.75, 0.25) * g14 / std::sqrt(2.0 * kPi), 1e-14);
    EXPECT_NEAR(e.values[1], std::pow(3.0, 0.75) * g34 / (5.0 * std::sqrt(kPi)), 1e-14);
    EXPECT_EQ(e.powers[0], Rational(1, 4));
    EXPECT_EQ(e.powers[1], Rational(-1, 4));
    const ExpansionCoeffs g = gamma_coeffs(crit, 1);
    EXPECT_NEAR(g.values[0], std::pow(0.75, 0.25) * g14 / kPi, 1e-14);
    EXPECT_NEAR(g.values[1], 7.0 * std::pow(3.0, 0.75) * g34 / (5.0 * std::sqrt(2.0) * kPi), 1e-13);
    const ExpansionCoeffs h = qn_coeffs(crit, 1);
    EXPECT_NEAR(h.values[1], 2.0 * std::sqrt(3.0) * std::sqrt(kPi) / (g14 * g14), 1e-13);

    const ModelParams high(2, 0.1, 0.0);
    EXPECT_NEAR(e_coeffs(high, 0).values[0], 1.0 / std::sqrt(1.0 - 0.4), 1e-15);
    EXPECT_NEAR(gamma_coeffs(high, 0).values[0], std::sqrt(2.0 / kPi) / std::sqrt(1.0 - 0.4), 1e-14);

    const ModelParams field(1, 0.3, 0.2);
    const double z = solve_mean_field(field).z_star;
    EXPECT_NEAR(e_coeffs(field, 0).values[0], 1.0 / std::sqrt(1.0 - 0.6 * (1.0 - z * z)), 1e-14);

    // Two maximizers double γ_0 and e_0, so H_0 is unchanged.
    const ModelParams low(1, 1.0, 0.0);
    const double t = solve_mean_field(low).t_star;
    const double g0 = 2.0 * std::sqrt(2.0 / kPi) / std::sqrt(2.0) /
                      std::sqrt(0.5 - 1.0 / std::pow(std::cosh(t), 2)) * std::cosh(t);
    EXPECT_NEAR(gamma_coeffs(low, 0).values[0], g0, 1e-12);
    EXPECT_NEAR(qn_coeffs(low, 0).values[0], std::sqrt(2.0 / kPi) * std::cosh(t), 1e-13);
}

TEST(Coefficients, QnPlusAsymptotic) {
    const PowerLaw high = qn_plus_asymptotic(ModelParams(1, 0.3, 0.0));
    EXPECT_NEAR(high.constant, std::sqrt(2.0 * 0.4 / kPi), 1e-15);
    EXPECT_EQ(high.exponent, Rational(-1, 2));
    const PowerLaw crit = qn_plus_asymptotic(ModelParams(1, 0.5, 0.0));
    EXPECT_NEAR(crit.constant, 2.0 / (std::pow(0.75, 0.25) * std::tgamma(0.25)), 1e-15);
    EXPECT_EQ(crit.exponent, Rational(-3, 4));
    const double z = 0.957504024077269;
    const PowerLaw low = qn_plus_asymptotic(ModelParams(1, 1.0, 0.0));
    EXPECT_NEAR(low.constant, std::sqrt((1.0 / (1.0 - z * z) - 2.0) / (2.0 * kPi)), 1e-12);
}

TEST(Coefficients, ForcedRegimeAndOrderLimits) {
    const ModelParams p(1, 0.3, 0.0);
    EXPECT_EQ(e_coeffs(p, 0, Regime::HighTemp).regime, Regime::HighTemp);
    EXPECT_THROW(e_coeffs(p, kMaxZOrder + 1), UsageError);
    EXPECT_THROW(gamma_coeffs(p, kMaxGammaOrder + 1), UsageError);
    EXPECT_THROW(e_coeffs(ModelParams(1, 0.7, 0.0), 0, Regime::HighTemp), DomainError);
}

TEST(Coefficients, IndependentCase) {
    // β = 0: Z = 2^n cosh(h)^n exactly, so the ladder is {1} and predict is exact.
    for (double h : {0.0, 0.7}) {
        const ModelParams p(1, 0.0, h);
        const ExpansionCoeffs e = e_coeffs(p, 2);
        EXPECT_DOUBLE_EQ(e.values[0], 1.0);
        EXPECT_EQ(e.values[1], 0.0);
        for (std::int64_t n : {1, 10, 1000}) {
            EXPECT_NEAR(static_cast<double>(predict_log(e, n)),
                        static_cast<double>(log_partition(p, n).log_value), 1e-12 * n);
        }
    }
    // γ at β = 0 is the β → 0 limit of the non-critical formula.
    const ExpansionCoeffs g0 = gamma_coeffs(ModelParams(1, 0.0, 0.7), 2);
    const ExpansionCoeffs g1 = gamma_coeffs(ModelParams(1, 1e-7, 0.7), 2);
    for (int i = 0; i <= 2; ++i) {
        expect_rel(g0.values[static_cast<std::size_t>(i)], g1.values[static_cast<std::size_t>(i)],
                   1e-5);
    }
}

TEST(Predict, Ladders) {
    const ExpansionCoeffs h = qn_coeffs(ModelParams(1, 0.3, 0.0), 0);
    EXPECT_NEAR(predict(h, 10000), std::sqrt(2.0 / kPi) * 1e-2, 1e-17);
    const ModelParams crit(1, 0.5, 0.0);
    const ExpansionCoeffs hc = qn_coeffs(crit, 1);
    const double n = 1e6;
    const double exact = qn_even_exact(crit, 1000000).probability;
    EXPECT_NEAR(predict(hc, 1000000), exact, 1e-9);
    EXPECT_LT(std::fabs(predict(hc, 1000000) - exact), std::fabs(predict(hc, 1000000, 0) - exact));
    EXPECT_NEAR(predict(hc, 1000000, 0), std::sqrt(2.0 / kPi) / std::sqrt(n), 1e-18);
    EXPECT_THROW(predict(hc, 0), UsageError);
}
