#include <algorithm>
#include <cmath>
#include <vector>

#include "cwlo/exact.hpp"

namespace cwlo::serial {

namespace {

long double log_sum_exp(const std::vector<long double>& terms) {
    const long double m = *std::max_element(terms.begin(), terms.end());
    long double s = 0.0L;
    for (long double t : terms) {
        s += std::exp(t - m);
    }
    return m + std::log(s);
}

long double lchoose(std::int64_t n, std::int64_t k) {
    return std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
}

std::vector<long double> partition_terms(const ModelParams& p, std::int64_t n) {
    const long double c = static_cast<long double>(p.coupling()) / n;
    const long double h = p.abs_h();
    std::vector<long double> terms(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) {
        const long double s = 2 * k - n;
        terms[static_cast<std::size_t>(k)] = lchoose(n, k) + c * s * s + h * s;
    }
    return terms;
}

}  // namespace

LogValue log_partition(const ModelParams& p, std::int64_t n) {
    if (n < 1) {
        throw UsageError("serial::log_partition: n must be positive");
    }
    return {log_sum_exp(partition_terms(p, n))};
}

LogValue log_O_even(const ModelParams& p, std::int64_t n) {
    if (n < 2 || n % 2 != 0) {
        throw UsageError("serial::log_O_even: n must be even");
    }
    const std::int64_t m = n / 2;
    const long double c = static_cast<long double>(p.coupling()) / n;
    const long double h = p.abs_h();
    std::vector<long double> terms;
    for (std::int64_t a = 0; a <= m; ++a) {
        const long double s = 4 * a - n;
        terms.push_back(2.0L * lchoose(m, a) + c * s * s + h * s);
    }
    return {log_sum_exp(terms)};
}

LogValue log_O_odd(const ModelParams& p, std::int64_t n) {
    if (n < 1 || n % 2 != 1) {
        throw UsageError("serial::log_O_odd: n must be odd");
    }
    const std::int64_t m = (n - 1) / 2;
    const long double c = static_cast<long double>(p.coupling()) / n;
    const long double h = p.abs_h();
    std::vector<long double> terms;
    for (std::int64_t a = 0; a <= m; ++a) {
        const long double s = 4 * a - n;
        terms.push_back(lchoose(m, a) + lchoose(m + 1, a) + c * s * s + h * s);
    }
    return {log_sum_exp(terms)};
}

ConcentrationResult qn_plus_exact(const ModelParams& p, std::int64_t n) {
    if (n < 1) {
        throw UsageError("serial::qn_plus_exact: n must be positive");
    }
    const std::vector<long double> terms = partition_terms(p, n);
    const long double best = *std::max_element(terms.begin(), terms.end());
    ConcentrationResult r;
    r.log_numerator = best;
    r.log_denominator = log_sum_exp(terms);
    r.probability = static_cast<double>(std::exp(best - r.log_denominator));
    const long double threshold = best + std::log1p(-static_cast<long double>(kTieRelTol));
    std::vector<std::int64_t> ks;
    for (std::int64_t k = 0; k <= n; ++k) {
        if (terms[static_cast<std::size_t>(k)] >= threshold) {
            ks.push_back(p.h() < 0.0 ? n - k : k);
        }
    }
    std::sort(ks.begin(), ks.end());
    for (std::int64_t k : ks) {
        r.attaining.push_back({k});
    }
    return r;
}

}  // namespace cwlo::serial
