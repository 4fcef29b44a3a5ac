#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cwlo/model.hpp"
#include "cwlo/quadrature.hpp"

namespace cwlo {

struct Atom {
    double location;
    double mass;
};

// Finite law on ℝ: locations strictly increasing, masses positive, total 1.
class AtomDistribution {
public:
    AtomDistribution() = default;

    // Sorts, merges locations closer than 1e-12 (relative), drops zero masses and
    // checks that the total is 1 within 1e-12.
    static AtomDistribution from_atoms(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double total_mass() const;

private:
    std::vector<Atom> atoms_;
};

// The open window (x-1, x+1) is realized as: atoms j with loc_j - loc_i < 2(1 - δ).
inline constexpr double kWindowShrink = 1e-9;

struct WindowSup {
    double sup = 0.0;
    double witness_x = 0.0;
};

// sup_x P(X ∈ (x-1, x+1)) by a two-pointer sweep over sorted atoms.
WindowSup window_sup(const AtomDistribution& dist);
// Same by checking every left atom against every right atom.
WindowSup window_sup_quadratic(const AtomDistribution& dist);

inline constexpr int kMaxEnumerationN = 16;

// Law of Σ v_iσ_i under the Curie–Weiss measure, by enumerating all 2^n spins.
AtomDistribution spin_sum_distribution(const ModelParams& p, std::span<const double> v);

// A weight value and how many coordinates carry it.
struct WeightType {
    double value;
    int count;
};

// Same law for a vector given as a multiset of weights. Uses exchangeability: only the
// number of +1 spins inside each weight class matters.
AtomDistribution grouped_spin_sum_distribution(const ModelParams& p,
                                               std::span<const WeightType> types);

// Requires n ≤ 16 and |v_i| ≥ 1.
WindowSup brute_force_sup(const ModelParams& p, std::span<const double> v);

enum class SignMode { Positive, Signed };

struct QnSearchResult {
    double best = 0.0;
    std::vector<double> best_v;
    // The conjectured maximizer: all ones (Positive) or balanced ±1 (Signed).
    double reference = 0.0;
    std::vector<double> reference_v;
    // max over searched vectors of (value - reference).
    double max_excess = 0.0;
    std::int64_t multisets = 0;
};

inline constexpr int kMaxSearchN = 12;

// Maximizes brute_force_sup over all vectors with entries from the grid (and their
// negatives in Signed mode). The reference vector is evaluated first and is only
// replaced by a vector that beats it by more than 1e-12.
QnSearchResult brute_force_qn(const ModelParams& p, int n, std::span<const double> weight_grid,
                              SignMode mode = SignMode::Signed);

// Non-negative weights that rise then fall.
class UnimodalWeights {
public:
    explicit UnimodalWeights(std::vector<double> values);

    static bool is_unimodal(std::span<const double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
};

struct ShiftMax {
    double max = 0.0;
    std::int64_t d = 0;
};

// max_d Σ_{k-m=d} f(k)g(m); smallest d on ties.
ShiftMax parallel_shift_max(const UnimodalWeights& f, const UnimodalWeights& g);

inline constexpr std::size_t kMaxGraphSide = 9;

// Maximum of Σ f(k)g(m) over chains of edges (m,k) strictly increasing in both
// coordinates, by dynamic programming.
double noncrossing_bruteforce(const UnimodalWeights& f, const UnimodalWeights& g);

// Same maximum by listing every chain; no unimodality needed.
double noncrossing_exhaustive(std::span<const double> f, std::span<const double> g);

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least squares of log r against log n; needs ≥ 4 samples with r > 0.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples);

// log Z(x), with Z(x) = (1/(2√(πdβ)x)) ∫ e^{φ(t)/x²} dt and Z_{d,β,h} = 2^n Z(1/√n).
double quad_Z_of_x(const ModelParams& p, double x, const QuadConfig& cfg = {});

// log W(x) = log[(1/((2π)^{3/2}√(2dβ)x)) ∫∫ e^{ψ(t,u)/x²} dt du], u ∈ (-π, π).
double quad_W(const ModelParams& p, double x, const QuadConfig& cfg = {});

// As quad_W with the extra factor ρ(t,u).
double quad_W_odd(const ModelParams& p, double x, const QuadConfig& cfg = {});

namespace serial {

AtomDistribution spin_sum_distribution(const ModelParams& p, std::span<const double> v);

}  // namespace serial

}  // namespace cwlo
