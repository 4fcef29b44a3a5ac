#include "cwlo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "cwlo/exact.hpp"
#include "cwlo/model.hpp"
#include "cwlo/oracle.hpp"
#include "cwlo/series.hpp"

namespace cwlo {

bool VerifyReport::passed() const {
    return !cases.empty() &&
           std::all_of(cases.begin(), cases.end(), [](const VerifyCase& c) { return c.pass; });
}

std::size_t VerifyReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(cases.begin(), cases.end(), [](const VerifyCase& c) { return !c.pass; }));
}

namespace {

const double kPi = std::numbers::pi;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string label(const ModelParams& p) {
    return "d=" + std::to_string(p.d()) + " beta=" + fmt(p.beta()) + " h=" + fmt(p.h());
}

VerifyCase absolute(std::string desc, double expected, double actual, double tol) {
    const bool ok = std::isfinite(actual) && std::fabs(actual - expected) <= tol;
    return {std::move(desc), expected, actual, tol, ok};
}

// Compares two logs: |exp(a - b) - 1| ≤ tol. Stored as expected 1, actual exp(a - b).
VerifyCase log_relative(std::string desc, long double log_actual, long double log_expected,
                        double tol) {
    const double ratio = static_cast<double>(std::exp(log_actual - log_expected));
    return absolute(std::move(desc), 1.0, ratio, tol);
}

// Runs body and stamps suite name and wall time, turning exceptions into a failed case.
VerifyReport timed(std::string suite, const std::function<void(VerifyReport&)>& body) {
    VerifyReport r;
    r.suite = std::move(suite);
    const auto start = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.cases.push_back({std::string("exception: ") + e.what(), 0.0, 0.0, 0.0, false});
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// One test point per regime.
std::vector<ModelParams> regime_points() {
    return {ModelParams(1, 0.3, 0.0), ModelParams(1, 0.5, 0.0), ModelParams(1, 1.0, 0.0),
            ModelParams(1, 0.3, 0.2)};
}

std::vector<std::int64_t> powers_of_two(int lo, int hi) {
    std::vector<std::int64_t> out;
    for (int k = lo; k <= hi; ++k) {
        out.push_back(std::int64_t{1} << k);
    }
    return out;
}

// log of Σ over σ ∈ {±1}^n passing `keep` of exp((dβ/n)S² + hS).
long double direct_log_sum(const ModelParams& p, int n, double h,
                           const std::function<bool(std::uint32_t)>& keep) {
    std::vector<long double> terms;
    for (std::uint32_t c = 0; c < (1u << n); ++c) {
        if (!keep(c)) {
            continue;
        }
        const long double s = 2.0L * __builtin_popcount(c) - n;
        terms.push_back(static_cast<long double>(p.coupling()) / n * s * s +
                        static_cast<long double>(h) * s);
    }
    const long double m = *std::max_element(terms.begin(), terms.end());
    long double acc = 0.0L;
    for (long double t : terms) {
        acc += std::exp(t - m);
    }
    return m + std::log(acc);
}

int popcount_range(std::uint32_t c, int lo, int hi) {
    const std::uint32_t mask = ((1u << (hi - lo)) - 1u) << lo;
    return __builtin_popcount(c & mask);
}

}  // namespace

VerifyReport check_exhaustive_equivalence() {
    return timed("exhaustive equivalence", [](VerifyReport& r) {
        constexpr double kTol = 1e-12;
        for (int d = 1; d <= 3; ++d) {
            const double bc = beta_critical(d);
            const std::vector<std::pair<double, double>> grid = {
                {0.0, 0.0},        {0.5 * bc, 0.0},   {0.9 * bc, 0.0},   {bc, 0.0},
                {1.2 * bc, 0.0},   {2.0 * bc, 0.0},   {4.0 * bc, 0.0},   {0.5 * bc, 0.3},
                {bc, -0.2},        {2.0 * bc, 0.5},   {2.0 * bc, -1.0},  {1.5 * bc, 0.05}};
            for (const auto& [beta, h] : grid) {
                const ModelParams p(d, beta, h);
                const std::string tag = label(p);
                int worst_n = 0;
                double worst = 0.0;
                auto track = [&](int n, long double a, long double b) {
                    const double e = std::fabs(static_cast<double>(std::expm1(a - b)));
                    if (!(e <= worst)) {
                        worst = e;
                        worst_n = n;
                    }
                };
                for (int n = 1; n <= 14; ++n) {
                    track(n, log_partition(p, n).log_value,
                          direct_log_sum(p, n, h, [](std::uint32_t) { return true; }));
                    if (n % 2 == 0) {
                        const int half = n / 2;
                        track(n, log_O_even(p, n).log_value,
                              direct_log_sum(p, n, h, [&](std::uint32_t c) {
                                  return popcount_range(c, 0, half) == popcount_range(c, half, n);
                              }));
                    } else {
                        const int lo = (n - 1) / 2;
                        track(n, log_O_odd(p, n).log_value,
                              direct_log_sum(p, n, std::fabs(h), [&](std::uint32_t c) {
                                  return popcount_range(c, 0, lo) == popcount_range(c, lo, n);
                              }));
                    }
                }
                r.cases.push_back(absolute(tag + ": max |ratio-1| over n<=14 (worst n=" +
                                               std::to_string(worst_n) + ")",
                                           0.0, worst, kTol));
            }
        }
    });
}

VerifyReport check_qn_plus_leading() {
    return timed("Q_n+ leading constant", [](VerifyReport& r) {
        constexpr std::int64_t n = 1000000;
        const ModelParams high(1, 0.3, 0.0);
        const double c_high = std::sqrt(2.0 * 0.4 / kPi);
        const double q_high = qn_plus_exact(high, n).probability;
        r.cases.push_back(absolute("HighTemp " + label(high) + " Q+ n^(1/2), n=1e6", c_high,
                                   q_high * std::sqrt(static_cast<double>(n)), 2e-3));
        const ModelParams crit(1, 0.5, 0.0);
        const double c_crit = 2.0 / (std::pow(0.75, 0.25) * std::tgamma(0.25));
        const double q_crit = qn_plus_exact(crit, n).probability;
        r.cases.push_back(absolute("Critical " + label(crit) + " Q+ n^(3/4), n=1e6", c_crit,
                                   q_crit * std::pow(static_cast<double>(n), 0.75), 5e-3));
        // The library's constants should be the same numbers.
        r.cases.push_back(absolute("qn_plus_asymptotic HighTemp constant", c_high,
                                   qn_plus_asymptotic(high).constant, 1e-15));
        r.cases.push_back(absolute("qn_plus_asymptotic Critical constant", c_crit,
                                   qn_plus_asymptotic(crit).constant, 1e-15));
    });
}

VerifyReport check_qn_leading() {
    return timed("Q_n leading term", [](VerifyReport& r) {
        constexpr std::int64_t n = 1000000;
        for (const ModelParams& p : regime_points()) {
            const double t = solve_mean_field(p).t_star;
            const double expected = std::sqrt(2.0 / kPi) * std::cosh(t);
            const double q = qn_even_exact(p, n).probability;
            r.cases.push_back(absolute(std::string(to_string(classify_regime(p))) + " " +
                                           label(p) + " Q_n n^(1/2), n=1e6",
                                       expected, q * std::sqrt(static_cast<double>(n)), 3e-3));
        }
    });
}

VerifyReport check_critical_second_term() {
    return timed("critical second term", [](VerifyReport& r) {
        const ModelParams p(1, 0.5, 0.0);
        const double g = std::tgamma(0.25);
        const double target = 2.0 * std::sqrt(3.0) * std::sqrt(kPi) / (g * g);
        double prev_err = 1.0;
        const auto ns = std::vector<std::int64_t>{1 << 14, 1 << 16, 1 << 18, 1 << 20};
        for (std::int64_t n : ns) {
            const double nd = static_cast<double>(n);
            const double q = qn_even_exact(p, n).probability;
            const double v = nd * (q - std::sqrt(2.0 / kPi) / std::sqrt(nd));
            const double err = std::fabs(v / target - 1.0);
            if (n == ns.back()) {
                r.cases.push_back(absolute("n(Q_n - sqrt(2/pi) n^-1/2) at n=2^20 vs H_1 (rel 2%)",
                                           target, v, 0.02 * target));
            } else {
                // Earlier terms must approach the target.
                r.cases.push_back({"relative error at n=" + std::to_string(n) +
                                       " below the previous one",
                                   0.0, err, prev_err, err < prev_err});
            }
            prev_err = err;
        }
    });
}

VerifyReport check_qn_remainder_order() {
    return timed("Q_n remainder order", [](VerifyReport& r) {
        for (const ModelParams& p : regime_points()) {
            if (classify_regime(p) == Regime::Critical) {
                continue;
            }
            const double h0 = qn_coeffs(p, 0).values[0];
            std::vector<std::pair<double, double>> samples;
            for (std::int64_t n : powers_of_two(8, 16)) {
                const double nd = static_cast<double>(n);
                samples.emplace_back(nd,
                                     std::fabs(qn_even_exact(p, n).probability - h0 / std::sqrt(nd)));
            }
            const PowerLawFit fit = fit_power_law(samples);
            VerifyCase c{std::string(to_string(classify_regime(p))) + " " + label(p) +
                             " slope of |Q_n - H_0 n^-1/2| (need <= -1.35)",
                         -1.5, fit.slope, 0.15, fit.slope <= -1.35};
            r.cases.push_back(c);
        }
    });
}

VerifyReport check_partition_orders() {
    return timed("partition expansion orders", [](VerifyReport& r) {
        for (const ModelParams& p : regime_points()) {
            const ExpansionCoeffs e = e_coeffs(p, 2);
            std::vector<std::pair<double, double>> samples;
            for (std::int64_t n : powers_of_two(8, 16)) {
                const long double log_norm =
                    log_partition(p, n).log_value - static_cast<long double>(n) * e.prefactor_log;
                const double norm = static_cast<double>(std::exp(log_norm));
                samples.emplace_back(static_cast<double>(n),
                                     std::fabs(norm - e.ladder_sum(static_cast<double>(n), 1)));
            }
            const PowerLawFit fit = fit_power_law(samples);
            r.cases.push_back(absolute(std::string(to_string(e.regime)) + " " + label(p) +
                                           " slope of two-term Z residual vs n^" +
                                           e.powers[2].str(),
                                       e.powers[2].value(), fit.slope, 0.15));
        }
    });
}

VerifyReport check_quadrature_oracles() {
    return timed("quadrature oracles", [](VerifyReport& r) {
        constexpr double kTol = 1e-6;
        const long double ln2 = std::numbers::ln2_v<long double>;
        for (const ModelParams& p : regime_points()) {
            const std::string tag = std::string(to_string(classify_regime(p))) + " " + label(p);
            for (std::int64_t n : {50, 200, 1000}) {
                const double x = 1.0 / std::sqrt(static_cast<double>(n));
                const std::string ns = std::to_string(n);
                r.cases.push_back(log_relative(tag + " 2^n Z(1/sqrt n), n=" + ns,
                                               n * ln2 + quad_Z_of_x(p, x),
                                               log_partition(p, n).log_value, kTol));
                r.cases.push_back(log_relative(tag + " 2^n W(1/sqrt n), n=" + ns,
                                               n * ln2 + quad_W(p, x),
                                               log_O_even(p, n).log_value, kTol));
                const std::int64_t m = n + 1;
                const double xo = 1.0 / std::sqrt(static_cast<double>(m));
                r.cases.push_back(log_relative(tag + " 2^n W_odd(1/sqrt n), n=" + std::to_string(m),
                                               m * ln2 + quad_W_odd(p, xo),
                                               log_O_odd(p, m).log_value, kTol));
            }
        }
    });
}

VerifyReport check_mixture_identity() {
    return timed("mixture identity", [](VerifyReport& r) {
        for (double h : {0.0, 0.4}) {
            const ModelParams p(1, 0.3, h);
            for (std::int64_t n : {8, 12, 20}) {
                const std::string tag = label(p) + " n=" + std::to_string(n);
                r.cases.push_back(absolute(tag + " integral of Q_{n,p} nu(dp) vs Q_n",
                                           qn_even_exact(p, n).probability,
                                           qn_even_via_mixture(p, n), 1e-8));
                r.cases.push_back(absolute(tag + " integral of nu", 1.0, nu_total_mass(p, n), 1e-8));
            }
        }
    });
}

namespace {

constexpr std::uint64_t kGraphSeed = 20240611;

// Non-negative integer weights: a sorted rise followed by a sorted fall.
std::vector<double> random_unimodal(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size_dist(1, 7);
    std::uniform_int_distribution<int> value_dist(0, 20);
    const int size = size_dist(rng);
    std::uniform_int_distribution<int> peak_dist(0, size - 1);
    const int peak = peak_dist(rng);
    std::vector<double> v(static_cast<std::size_t>(size));
    for (double& x : v) {
        x = value_dist(rng);
    }
    std::sort(v.begin(), v.begin() + peak + 1);
    std::sort(v.begin() + peak + 1, v.end(), std::greater<>());
    // The fall must start no higher than the peak.
    const double top = *std::max_element(v.begin(), v.end());
    v[static_cast<std::size_t>(peak)] = top;
    return v;
}

}  // namespace

VerifyReport check_graph_parallel() {
    return timed("graph parallel optimum", [](VerifyReport& r) {
        std::mt19937_64 rng(kGraphSeed);
        int agree = 0;
        int exhaustive_agree = 0;
        constexpr int kTrials = 200;
        for (int trial = 0; trial < kTrials; ++trial) {
            const UnimodalWeights f(random_unimodal(rng));
            const UnimodalWeights g(random_unimodal(rng));
            const double dp = noncrossing_bruteforce(f, g);
            const double shift = parallel_shift_max(f, g).max;
            agree += dp == shift;
            exhaustive_agree += noncrossing_exhaustive(f.values(), g.values()) == dp;
        }
        r.cases.push_back({"random integer unimodal pairs (seed " + std::to_string(kGraphSeed) +
                               "): non-crossing == parallel, exact",
                           kTrials, static_cast<double>(agree), 0.0, agree == kTrials});
        r.cases.push_back({"random pairs: chain DP == full chain listing, exact", kTrials,
                           static_cast<double>(exhaustive_agree), 0.0,
                           exhaustive_agree == kTrials});
        int total = 0;
        int binom_agree = 0;
        double worst = 0.0;
        for (int a = 1; a <= 7; ++a) {
            for (int b = 1; b <= 7; ++b) {
                for (int k = 1; k <= 9; ++k) {
                    const double prob = k / 10.0;
                    const UnimodalWeights f(binomial_pmf(a, prob));
                    const UnimodalWeights g(binomial_pmf(b, prob));
                    const double dp = noncrossing_bruteforce(f, g);
                    const double shift = parallel_shift_max(f, g).max;
                    const double rel = std::fabs(dp - shift) / shift;
                    worst = std::max(worst, rel);
                    binom_agree += rel <= 1e-12;
                    ++total;
                }
            }
        }
        r.cases.push_back({"binomial pairs, block sizes <= 7, p in {0.1..0.9}: agreeing pairs",
                           static_cast<double>(total), static_cast<double>(binom_agree), 0.0,
                           binom_agree == total});
        r.cases.push_back(absolute("binomial pairs: max relative gap", 0.0, worst, 1e-12));
    });
}

VerifyReport check_attainment() {
    return timed("attainment consistency", [](VerifyReport& r) {
        constexpr double kMargin = 1e-12;
        const std::vector<double> grid = {1.0, 1.25, 1.5, 2.0};
        for (const ModelParams& p : regime_points()) {
            const std::string tag = label(p);
            for (int n = 1; n <= kMaxSearchN; ++n) {
                const QnSearchResult pos = brute_force_qn(p, n, grid, SignMode::Positive);
                const double qplus = qn_plus_exact(p, n).probability;
                r.cases.push_back({tag + " n=" + std::to_string(n) + " positive grid vs Q_n+",
                                   qplus, pos.best, kMargin,
                                   pos.best <= qplus + kMargin &&
                                       std::fabs(pos.reference - qplus) <= kMargin});
                if (n < 2) {
                    continue;
                }
                const QnSearchResult sgn = brute_force_qn(p, n, grid, SignMode::Signed);
                if (n % 2 == 0) {
                    const double q = qn_even_exact(p, n).probability;
                    r.cases.push_back({tag + " n=" + std::to_string(n) + " signed grid vs Q_n",
                                       q, sgn.best, kMargin,
                                       sgn.best <= q + kMargin &&
                                           std::fabs(sgn.reference - q) <= kMargin});
                } else {
                    const QnBounds b = qn_bounds(p, n);
                    r.cases.push_back({tag + " n=" + std::to_string(n) +
                                           " signed grid within [P_n, Q_{n-1}]",
                                       b.upper, sgn.best, kMargin,
                                       sgn.best <= b.upper + kMargin &&
                                           sgn.best >= b.lower - kMargin});
                }
            }
        }
    });
}

VerifyReport check_meanfield_identities() {
    return timed("mean-field identities", [](VerifyReport& r) {
        const double ln2 = std::numbers::ln2;
        for (int d = 1; d <= 3; ++d) {
            for (double kappa : {0.5, 1.0, 1.5, 3.0}) {
                for (double h : {0.0, 0.1, -0.5}) {
                    const ModelParams p(d, kappa / (2.0 * d), h);
                    const MeanFieldSolution s = solve_mean_field(p);
                    const std::string tag = label(p);
                    r.cases.push_back(absolute(tag + " z* = tanh(kappa z* + |h|)", 0.0,
                                               s.z_star - std::tanh(p.kappa() * s.z_star + p.abs_h()),
                                               1e-13));
                    r.cases.push_back(absolute(tag + " -f_CW(z*) = ln 2 + phi(t*)",
                                               ln2 + phi(p, s.t_star),
                                               -free_energy(p, s.z_star), 1e-12));
                    double best = free_energy(p, s.z_star);
                    for (double z : s.all_solutions) {
                        best = std::min(best, free_energy(p, z));
                    }
                    r.cases.push_back(absolute(tag + " z* minimizes f_CW among roots",
                                               best, free_energy(p, s.z_star), 1e-13));
                }
            }
        }
    });
}

VerifyReport check_coefficient_closed_forms() {
    return timed("coefficient closed forms", [](VerifyReport& r) {
        const double s2pi = std::sqrt(2.0 / kPi);
        for (double beta : {0.1, 0.3, 0.45}) {
            const ModelParams p(1, beta, 0.0);
            r.cases.push_back(absolute(label(p) + " e_0 = (1 - kappa)^(-1/2)",
                                       1.0 / std::sqrt(1.0 - p.kappa()),
                                       e_coeffs(p, 0).values[0], 1e-13));
            r.cases.push_back(absolute(label(p) + " H_0 = sqrt(2/pi)", s2pi,
                                       qn_coeffs(p, 0).values[0], 1e-13));
        }
        for (int d = 1; d <= 3; ++d) {
            const ModelParams p(d, beta_critical(d), 0.0);
            const double g = std::tgamma(0.25);
            r.cases.push_back(absolute(label(p) + " critical e_0 = 12^(1/4) Gamma(1/4)/(2 sqrt(2pi))",
                                       std::pow(12.0, 0.25) * g / (2.0 * std::sqrt(2.0 * kPi)),
                                       e_coeffs(p, 0).values[0], 1e-13));
            const ExpansionCoeffs h = qn_coeffs(p, 1);
            r.cases.push_back(absolute(label(p) + " critical H_0", s2pi, h.values[0], 1e-13));
            r.cases.push_back(absolute(label(p) + " critical H_1 = 2 sqrt(3 pi)/Gamma(1/4)^2",
                                       2.0 * std::sqrt(3.0 * kPi) / (g * g), h.values[1], 1e-12));
            const bool powers_ok = h.powers[0] == Rational(-1, 2) && h.powers[1] == Rational(-1);
            r.cases.push_back({label(p) + " critical Q_n powers -1/2, -1", 1.0,
                               powers_ok ? 1.0 : 0.0, 0.0, powers_ok});
        }
        for (const ModelParams& p : {ModelParams(1, 1.0, 0.0), ModelParams(2, 0.5, 0.0),
                                     ModelParams(1, 0.3, 0.2), ModelParams(1, 1.0, -0.5)}) {
            const MeanFieldSolution s = solve_mean_field(p);
            const double curv = 1.0 - p.kappa() * (1.0 - s.z_star * s.z_star);
            const bool two_bumps = classify_regime(p) == Regime::LowTemp;
            r.cases.push_back(absolute(label(p) + " e_0 = (1 or 2)/sqrt(1 - kappa(1 - z*^2))",
                                       (two_bumps ? 2.0 : 1.0) / std::sqrt(curv),
                                       e_coeffs(p, 0).values[0], 1e-12));
            r.cases.push_back(absolute(label(p) + " H_0 = sqrt(2/pi) cosh t*",
                                       s2pi * std::cosh(s.t_star), qn_coeffs(p, 0).values[0],
                                       1e-12));
        }
    });
}

VerifyReport run_suite(std::string_view name) {
    std::vector<VerifyReport (*)()> checks;
    if (name == "bruteforce") {
        checks = {check_exhaustive_equivalence, check_attainment};
    } else if (name == "quadrature") {
        checks = {check_quadrature_oracles};
    } else if (name == "coefficients") {
        checks = {check_coefficient_closed_forms, check_qn_plus_leading, check_qn_leading,
                  check_critical_second_term, check_qn_remainder_order, check_partition_orders};
    } else if (name == "meanfield") {
        checks = {check_meanfield_identities};
    } else if (name == "mixture") {
        checks = {check_mixture_identity};
    } else if (name == "graphs") {
        checks = {check_graph_parallel};
    } else if (name == "all") {
        checks = {check_exhaustive_equivalence, check_qn_plus_leading, check_qn_leading,
                  check_critical_second_term,   check_qn_remainder_order, check_partition_orders,
                  check_quadrature_oracles,     check_mixture_identity,  check_graph_parallel,
                  check_attainment,             check_meanfield_identities,
                  check_coefficient_closed_forms};
    } else {
        throw UsageError("unknown suite: " + std::string(name));
    }
    VerifyReport out;
    out.suite = std::string(name);
    for (auto* check : checks) {
        VerifyReport part = check();
        out.seconds += part.seconds;
        for (VerifyCase& c : part.cases) {
            c.description = part.suite + ": " + c.description;
            out.cases.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace cwlo
