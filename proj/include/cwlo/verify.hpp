#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cwlo {

struct VerifyCase {
    std::string description;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::string suite;
    std::vector<VerifyCase> cases;
    double seconds = 0.0;

    // True iff every case passes (and there is at least one).
    bool passed() const;
    std::size_t failures() const;
};

// Each check is deterministic; random inputs come from a fixed seed.

// log_partition / log_O_even / log_O_odd against direct 2^n summation, n ≤ 14,
// on a 36-point grid over d ∈ {1,2,3} and all four regimes.
VerifyReport check_exhaustive_equivalence();
// Q_n⁺ leading constants at n = 10⁶ (HighTemp and Critical).
VerifyReport check_qn_plus_leading();
// Q_n·n^{1/2} against √(2/π)cosh t* at n = 10⁶ in every regime.
VerifyReport check_qn_leading();
// n(Q_n - √(2/π)n^{-1/2}) → H_1 at the critical point.
VerifyReport check_critical_second_term();
// Slope of |Q_n - H_0 n^{-1/2}| over n ∈ {2⁸..2¹⁶} in the non-critical regimes.
VerifyReport check_qn_remainder_order();
// Slope of the two-term partition residual against the first omitted power.
VerifyReport check_partition_orders();
// Quadrature of Z, W, W^odd against the exact sums, n ∈ {50, 200, 1000}.
VerifyReport check_quadrature_oracles();
// ∫Q_{n,p}ν(dp) = Q_n and ∫ν = 1.
VerifyReport check_mixture_identity();
// Non-crossing optimum equals the best parallel shift for unimodal weights.
VerifyReport check_graph_parallel();
// Exhaustive grid search never beats the all-ones or balanced ±1 vectors.
VerifyReport check_attainment();
// Mean-field fixed point and -f_CW(z*) = ln 2 + φ(t*).
VerifyReport check_meanfield_identities();
// Leading coefficients against their closed forms.
VerifyReport check_coefficient_closed_forms();

inline constexpr std::string_view kSuiteNames[] = {
    "bruteforce", "quadrature", "coefficients", "meanfield", "mixture", "graphs", "all"};

// Runs the named suite; throws UsageError for an unknown name.
VerifyReport run_suite(std::string_view name);

}  // namespace cwlo
