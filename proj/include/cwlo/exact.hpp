#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cwlo/model.hpp"
#include "cwlo/quadrature.hpp"

namespace cwlo {

// Natural log of a positive quantity too large for double.
struct LogValue {
    long double log_value = 0.0L;
};

struct ConcentrationResult {
    double probability = 0.0;
    long double log_numerator = 0.0L;
    long double log_denominator = 0.0L;
    // Each entry is one maximizer: {k} for Q_n⁺, {ℓ, d} for Q_{n,p},
    // {n/2, 0} for even Q_n and {(n-1)/2, 1} for P_n. Sorted ascending.
    std::vector<std::vector<std::int64_t>> attaining;
};

struct QnBounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Ties inside this relative gap are reported together.
inline constexpr double kTieRelTol = 1e-12;

// log C(n,k) via the reentrant log-gamma.
long double log_binomial(std::int64_t n, std::int64_t k);

// log Σ_k C(n,k) exp((dβ/n)(2k-n)² + h(2k-n)).
LogValue log_partition(const ModelParams& p, std::int64_t n);

// Q_n⁺ = max_k C(n,k)exp(...)/Z.
ConcentrationResult qn_plus_exact(const ModelParams& p, std::int64_t n);

// log Σ_a C(n/2,a)² exp((dβ/n)(4a-n)² + h(4a-n)), n even.
LogValue log_O_even(const ModelParams& p, std::int64_t n);

// Q_n = O/Z for even n.
ConcentrationResult qn_even_exact(const ModelParams& p, std::int64_t n);

// log Σ_a C((n-1)/2,a)C((n+1)/2,a) exp((dβ/n)(4a-n)² + |h|(4a-n)), n odd.
// The field is folded to |h| so the result is symmetric in h.
LogValue log_O_odd(const ModelParams& p, std::int64_t n);

// P_n = O^odd/Z for odd n.
ConcentrationResult pn_odd_exact(const ModelParams& p, std::int64_t n);

// (Q_n, Q_n) for even n; (P_n, Q_{n-1}) for odd n.
QnBounds qn_bounds(const ModelParams& p, std::int64_t n);

// Probability mass function of Binomial(n, p) as doubles.
std::vector<double> binomial_pmf(std::int64_t n, double prob);

// Q_{n,p}: max over the split ℓ and integer d of P(Σ_{i≤ℓ}ε_i - Σ_{j>ℓ}ε_j = d) for
// i.i.d. ±1 spins with P(+1) = prob.
ConcentrationResult bernoulli_qnp(std::int64_t n, double prob);

// Mixing density of the Bernoulli bias p, with ∫₀¹ ν = 1.
class NuDensity {
public:
    NuDensity(const ModelParams& p, std::int64_t n);

    const ModelParams& params() const { return params_; }
    std::int64_t n() const { return n_; }
    LogValue normalization() const { return log_z_; }

    double log_density(double x) const;
    double density(double x) const { return std::exp(log_density(x)); }

private:
    ModelParams params_;
    std::int64_t n_;
    LogValue log_z_;
};

double nu_density(const ModelParams& p, std::int64_t n, double x);

// ∫₀¹ ν(p) dp by quadrature (in t with p = 1/(1+e^{-2t})).
double nu_total_mass(const ModelParams& p, std::int64_t n, const QuadConfig& cfg = {});

// ∫₀¹ Q_{n,p} ν(p) dp by quadrature, n even.
double qn_even_via_mixture(const ModelParams& p, std::int64_t n, const QuadConfig& cfg = {});

// Straight single-threaded versions of the kernels above, kept as references.
namespace serial {

LogValue log_partition(const ModelParams& p, std::int64_t n);
LogValue log_O_even(const ModelParams& p, std::int64_t n);
LogValue log_O_odd(const ModelParams& p, std::int64_t n);
ConcentrationResult qn_plus_exact(const ModelParams& p, std::int64_t n);

}  // namespace serial

}  // namespace cwlo
