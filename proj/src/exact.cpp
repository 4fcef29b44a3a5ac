#include "cwlo/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cwlo/parallel.hpp"
#include "laplace_window.hpp"

namespace cwlo {

namespace {

long double lgamma_r(long double x) {
    int sign = 0;
    return ::lgammal_r(x, &sign);
}

void require_positive(std::int64_t n, const char* who) {
    if (n < 1) {
        throw UsageError(std::string(who) + ": n must be positive");
    }
}

// (dβ/n)s² + |h|s in long double.
struct Weight {
    long double coupling_over_n;
    long double field;

    Weight(const ModelParams& p, std::int64_t n)
        : coupling_over_n(static_cast<long double>(p.coupling()) / static_cast<long double>(n)),
          field(static_cast<long double>(p.abs_h())) {}

    long double operator()(std::int64_t s) const {
        const auto ls = static_cast<long double>(s);
        return coupling_over_n * ls * ls + field * ls;
    }
};

ConcentrationResult ratio(long double log_num, long double log_den) {
    ConcentrationResult r;
    r.log_numerator = log_num;
    r.log_denominator = log_den;
    r.probability = static_cast<double>(std::exp(log_num - log_den));
    return r;
}

}  // namespace

long double log_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) {
        throw UsageError("log_binomial: k out of range");
    }
    return lgamma_r(n + 1.0L) - lgamma_r(k + 1.0L) - lgamma_r(n - k + 1.0L);
}

LogValue log_partition(const ModelParams& p, std::int64_t n) {
    require_positive(n, "log_partition");
    const Weight w(p, n);
    const long double lg_n = lgamma_r(n + 1.0L);
    auto term = [&](std::int64_t k) {
        return lg_n - lgamma_r(k + 1.0L) - lgamma_r(n - k + 1.0L) + w(2 * k - n);
    };
    return {parallel_log_sum_exp(n + 1, term)};
}

ConcentrationResult qn_plus_exact(const ModelParams& p, std::int64_t n) {
    require_positive(n, "qn_plus_exact");
    const Weight w(p, n);
    const long double lg_n = lgamma_r(n + 1.0L);
    auto term = [&](std::int64_t k) {
        return lg_n - lgamma_r(k + 1.0L) - lgamma_r(n - k + 1.0L) + w(2 * k - n);
    };
    const long double log_z = parallel_log_sum_exp(n + 1, term);
    const long double best = parallel_max(n + 1, term);
    const long double threshold = best + std::log1p(-static_cast<long double>(kTieRelTol));
    ConcentrationResult r = ratio(best, log_z);
    // The sums run with |h|; for h < 0 the maximizing k mirrors to n - k.
    std::vector<std::int64_t> ks = parallel_collect_at_least(n + 1, term, threshold);
    if (p.h() < 0.0) {
        for (auto& k : ks) {
            k = n - k;
        }
        std::sort(ks.begin(), ks.end());
    }
    for (std::int64_t k : ks) {
        r.attaining.push_back({k});
    }
    return r;
}

LogValue log_O_even(const ModelParams& p, std::int64_t n) {
    if (n < 2 || n % 2 != 0) {
        throw UsageError("log_O_even: n must be even and at least 2");
    }
    const std::int64_t m = n / 2;
    const Weight w(p, n);
    const long double lg_m = lgamma_r(m + 1.0L);
    auto term = [&](std::int64_t a) {
        const long double lb = lg_m - lgamma_r(a + 1.0L) - lgamma_r(m - a + 1.0L);
        return 2.0L * lb + w(4 * a - n);
    };
    return {parallel_log_sum_exp(m + 1, term)};
}

ConcentrationResult qn_even_exact(const ModelParams& p, std::int64_t n) {
    if (n < 2 || n % 2 != 0) {
        throw UsageError("qn_even_exact: n must be even and at least 2");
    }
    ConcentrationResult r = ratio(log_O_even(p, n).log_value, log_partition(p, n).log_value);
    r.attaining.push_back({n / 2, 0});
    return r;
}

LogValue log_O_odd(const ModelParams& p, std::int64_t n) {
    if (n < 1 || n % 2 != 1) {
        throw UsageError("log_O_odd: n must be odd and positive");
    }
    const std::int64_t m = (n - 1) / 2;
    const Weight w(p, n);
    const long double lg_m = lgamma_r(m + 1.0L);
    const long double lg_m1 = lgamma_r(m + 2.0L);
    auto term = [&](std::int64_t a) {
        const long double la = lgamma_r(a + 1.0L);
        const long double lb1 = lg_m - la - lgamma_r(m - a + 1.0L);
        const long double lb2 = lg_m1 - la - lgamma_r(m + 1 - a + 1.0L);
        return lb1 + lb2 + w(4 * a - n);
    };
    return {parallel_log_sum_exp(m + 1, term)};
}

ConcentrationResult pn_odd_exact(const ModelParams& p, std::int64_t n) {
    if (n < 1 || n % 2 != 1) {
        throw UsageError("pn_odd_exact: n must be odd and positive");
    }
    ConcentrationResult r = ratio(log_O_odd(p, n).log_value, log_partition(p, n).log_value);
    r.attaining.push_back({(n - 1) / 2, 1});
    return r;
}

QnBounds qn_bounds(const ModelParams& p, std::int64_t n) {
    if (n < 2) {
        throw UsageError("qn_bounds: n must be at least 2");
    }
    if (n % 2 == 0) {
        const double q = qn_even_exact(p, n).probability;
        return {q, q};
    }
    return {pn_odd_exact(p, n).probability, qn_even_exact(p, n - 1).probability};
}

std::vector<double> binomial_pmf(std::int64_t n, double prob) {
    if (n < 0) {
        throw UsageError("binomial_pmf: n must be non-negative");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw DomainError("binomial_pmf: probability must lie in [0, 1]");
    }
    std::vector<double> out(static_cast<std::size_t>(n + 1), 0.0);
    if (prob == 0.0) {
        out.front() = 1.0;
        return out;
    }
    if (prob == 1.0) {
        out.back() = 1.0;
        return out;
    }
    const long double lp = std::log(static_cast<long double>(prob));
    const long double lq = std::log1p(-static_cast<long double>(prob));
    for (std::int64_t k = 0; k <= n; ++k) {
        out[static_cast<std::size_t>(k)] =
            static_cast<double>(std::exp(log_binomial(n, k) + k * lp + (n - k) * lq));
    }
    return out;
}

ConcentrationResult bernoulli_qnp(std::int64_t n, double prob) {
    require_positive(n, "bernoulli_qnp");
    // D = Σ_{i≤ℓ}ε_i - Σ_{j>ℓ}ε_j = 2(K₁ - K₂) + n - 2ℓ with K₁ ~ Bin(ℓ), K₂ ~ Bin(n-ℓ).
    struct Candidate {
        double mass;
        std::int64_t ell;
        std::int64_t d;
    };
    std::vector<Candidate> cands;
    double best = -1.0;
    for (std::int64_t ell = 0; ell <= n; ++ell) {
        const std::vector<double> f = binomial_pmf(ell, prob);
        const std::vector<double> g = binomial_pmf(n - ell, prob);
        for (std::int64_t s = -(n - ell); s <= ell; ++s) {
            double mass = 0.0;
            const std::int64_t k1_lo = std::max<std::int64_t>(0, s);
            const std::int64_t k1_hi = std::min<std::int64_t>(ell, s + (n - ell));
            for (std::int64_t k1 = k1_lo; k1 <= k1_hi; ++k1) {
                mass += f[static_cast<std::size_t>(k1)] * g[static_cast<std::size_t>(k1 - s)];
            }
            cands.push_back({mass, ell, 2 * s + n - 2 * ell});
            best = std::max(best, mass);
        }
    }
    ConcentrationResult r;
    r.probability = best;
    r.log_numerator = std::log(static_cast<long double>(best));
    r.log_denominator = 0.0L;
    for (const Candidate& c : cands) {
        if (c.mass >= best * (1.0 - kTieRelTol)) {
            r.attaining.push_back({c.ell, c.d});
        }
    }
    std::sort(r.attaining.begin(), r.attaining.end());
    return r;
}

NuDensity::NuDensity(const ModelParams& p, std::int64_t n)
    : params_(p), n_(n), log_z_(log_partition(p, n)) {
    if (!(p.beta() > 0.0)) {
        throw DomainError("NuDensity: requires beta > 0 (the mixing law is a point mass at beta = 0)");
    }
}

double NuDensity::log_density(double x) const {
    if (!(x > 0.0 && x < 1.0)) {
        throw DomainError("nu_density: x must lie in (0, 1)");
    }
    const long double n = static_cast<long double>(n_);
    const long double db = static_cast<long double>(params_.coupling());
    const long double lx = std::log(static_cast<long double>(x));
    const long double l1x = std::log1p(-static_cast<long double>(x));
    const long double center = 0.5L * (lx - l1x) - static_cast<long double>(params_.h());
    const long double v = -log_z_.log_value +
                          0.5L * std::log(n / (std::numbers::pi_v<long double> * db)) -
                          (std::log(4.0L) + lx + l1x) - 0.5L * n * (lx + l1x) -
                          n / (4.0L * db) * center * center;
    return static_cast<double>(v);
}

double nu_density(const ModelParams& p, std::int64_t n, double x) {
    return NuDensity(p, n).density(x);
}

namespace {

// ∫ f(p(t)) ν dp written in t, where f is symmetric under p ↔ 1-p so the field can be
// taken as |h|.
template <class F>
double mixture_integral(const ModelParams& p, std::int64_t n, const QuadConfig& cfg, F f) {
    require_positive(n, "mixture");
    if (!(p.beta() > 0.0)) {
        throw DomainError("mixture: requires beta > 0");
    }
    const double nd = static_cast<double>(n);
    const detail::PhiWindow win = detail::phi_window(p, nd);
    auto integrand = [&](double t) {
        const double e = std::exp(nd * (phi(p, t) - win.phi_star));
        if (e == 0.0) {
            return 0.0;
        }
        const double prob = 1.0 / (1.0 + std::exp(-2.0 * t));
        return f(prob) * e;
    };
    QuadResult q = win.even ? integrate_peaks(integrand, win.peaks, cfg, 0.0)
                            : integrate_peaks(integrand, win.peaks, cfg);
    if (win.even) {
        q.value *= 2.0;
    }
    const long double log_pref =
        n * std::numbers::ln2_v<long double> - log_partition(p, n).log_value +
        0.5L * std::log(static_cast<long double>(nd) /
                        (4.0L * std::numbers::pi_v<long double> * p.coupling())) +
        static_cast<long double>(nd) * static_cast<long double>(win.phi_star);
    return static_cast<double>(std::exp(log_pref) * q.value);
}

}  // namespace

double nu_total_mass(const ModelParams& p, std::int64_t n, const QuadConfig& cfg) {
    return mixture_integral(p, n, cfg, [](double) { return 1.0; });
}

double qn_even_via_mixture(const ModelParams& p, std::int64_t n, const QuadConfig& cfg) {
    if (n < 2 || n % 2 != 0) {
        throw UsageError("qn_even_via_mixture: n must be even and at least 2");
    }
    return mixture_integral(p, n, cfg,
                            [n](double prob) { return bernoulli_qnp(n, prob).probability; });
}

}  // namespace cwlo
