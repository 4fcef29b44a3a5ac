#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace cwlo {

// Worker count: CW_LO_THREADS if set to a positive integer, else the OpenMP default.
int configured_threads();

// Applies configured_threads() to the OpenMP runtime.
void apply_thread_limit();

namespace detail {

// Running (max, Σ exp(x - max)) pair.
struct LseAccumulator {
    long double max = -std::numeric_limits<long double>::infinity();
    long double sum = 0.0L;

    void add(long double x) {
        if (x == -std::numeric_limits<long double>::infinity()) {
            return;
        }
        if (x > max) {
            sum = sum * std::exp(max - x) + 1.0L;
            max = x;
        } else {
            sum += std::exp(x - max);
        }
    }

    void merge(const LseAccumulator& o) {
        if (o.sum == 0.0L) {
            return;
        }
        if (sum == 0.0L) {
            *this = o;
            return;
        }
        if (o.max > max) {
            sum = sum * std::exp(max - o.max) + o.sum;
            max = o.max;
        } else {
            sum += o.sum * std::exp(o.max - max);
        }
    }

    long double value() const {
        if (sum == 0.0L) {
            return -std::numeric_limits<long double>::infinity();
        }
        return max + std::log(sum);
    }
};

inline constexpr std::int64_t kChunk = 1 << 14;

}  // namespace detail

// log Σ_{i<count} exp(term(i)). Fixed-size chunks reduced in index order, so the
// result does not depend on the number of threads.
template <class Term>
long double parallel_log_sum_exp(std::int64_t count, Term term) {
    const std::int64_t chunks = (count + detail::kChunk - 1) / detail::kChunk;
    std::vector<detail::LseAccumulator> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        detail::LseAccumulator acc;
        const std::int64_t end = std::min(count, (c + 1) * detail::kChunk);
        for (std::int64_t i = c * detail::kChunk; i < end; ++i) {
            acc.add(term(i));
        }
        partial[static_cast<std::size_t>(c)] = acc;
    }
    detail::LseAccumulator total;
    for (const auto& a : partial) {
        total.merge(a);
    }
    return total.value();
}

// max_i term(i), exact under any thread count.
template <class Term>
long double parallel_max(std::int64_t count, Term term) {
    long double best = -std::numeric_limits<long double>::infinity();
#pragma omp parallel for reduction(max : best) schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        best = std::max(best, static_cast<long double>(term(i)));
    }
    return best;
}

// Indices i with term(i) >= threshold, ascending.
template <class Term>
std::vector<std::int64_t> parallel_collect_at_least(std::int64_t count, Term term,
                                                    long double threshold) {
    const std::int64_t chunks = (count + detail::kChunk - 1) / detail::kChunk;
    std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::int64_t end = std::min(count, (c + 1) * detail::kChunk);
        for (std::int64_t i = c * detail::kChunk; i < end; ++i) {
            if (term(i) >= threshold) {
                partial[static_cast<std::size_t>(c)].push_back(i);
            }
        }
    }
    std::vector<std::int64_t> out;
    for (const auto& v : partial) {
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

}  // namespace cwlo
