#include "cwlo/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "cwlo/exact.hpp"
#include "laplace_window.hpp"

namespace cwlo {

// ---------------------------------------------------------------- atoms and windows

AtomDistribution AtomDistribution::from_atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    AtomDistribution d;
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.location) || !(a.mass >= 0.0)) {
            throw UsageError("AtomDistribution: non-finite location or negative mass");
        }
        if (a.mass == 0.0) {
            continue;
        }
        if (!d.atoms_.empty()) {
            Atom& last = d.atoms_.back();
            const double scale = std::max(1.0, std::fabs(a.location));
            if (a.location - last.location <= 1e-12 * scale) {
                last.mass += a.mass;
                continue;
            }
        }
        d.atoms_.push_back(a);
    }
    if (std::fabs(d.total_mass() - 1.0) > 1e-12) {
        throw UsageError("AtomDistribution: masses must sum to 1");
    }
    return d;
}

double AtomDistribution::total_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms_) {
        s += a.mass;
    }
    return s;
}

namespace {

constexpr double kWindowWidth = 2.0 * (1.0 - kWindowShrink);

WindowSup pick(double mass, double left, double right) {
    return {mass, 0.5 * (left + right)};
}

}  // namespace

WindowSup window_sup(const AtomDistribution& dist) {
    const auto& a = dist.atoms();
    WindowSup best;
    double mass = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (j < i) {
            j = i;
            mass = 0.0;
        }
        while (j < a.size() && a[j].location - a[i].location < kWindowWidth) {
            mass += a[j].mass;
            ++j;
        }
        if (mass > best.sup) {
            best = pick(mass, a[i].location, a[j - 1].location);
        }
        mass -= a[i].mass;
    }
    return best;
}

WindowSup window_sup_quadratic(const AtomDistribution& dist) {
    const auto& a = dist.atoms();
    WindowSup best;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double mass = 0.0;
        std::size_t last = i;
        for (std::size_t j = i; j < a.size(); ++j) {
            if (a[j].location - a[i].location < kWindowWidth) {
                mass += a[j].mass;
                last = j;
            }
        }
        if (mass > best.sup) {
            best = pick(mass, a[i].location, a[last].location);
        }
    }
    return best;
}

// ---------------------------------------------------------------- enumeration

namespace {

void check_vector(std::span<const double> v) {
    if (v.empty() || v.size() > static_cast<std::size_t>(kMaxEnumerationN)) {
        throw UsageError("spin enumeration: need 1 <= n <= 16");
    }
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw UsageError("spin enumeration: weights must be finite");
        }
    }
}

// Unnormalized log weight (dβ/n)S² + hS of a configuration with spin sum S.
double log_weight(const ModelParams& p, int n, int s) {
    return p.coupling() / n * s * s + p.h() * s;
}

AtomDistribution normalize(std::vector<Atom> atoms) {
    double total = 0.0;
    for (const Atom& a : atoms) {
        total += a.mass;
    }
    for (Atom& a : atoms) {
        a.mass /= total;
    }
    return AtomDistribution::from_atoms(std::move(atoms));
}

double max_log_weight(const ModelParams& p, int n) {
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        m = std::max(m, log_weight(p, n, 2 * k - n));
    }
    return m;
}

}  // namespace

AtomDistribution spin_sum_distribution(const ModelParams& p, std::span<const double> v) {
    check_vector(v);
    const int n = static_cast<int>(v.size());
    const std::int64_t count = std::int64_t{1} << n;
    const double shift = max_log_weight(p, n);
    std::vector<Atom> atoms(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < count; ++c) {
        double loc = 0.0;
        for (int i = 0; i < n; ++i) {
            loc += ((c >> i) & 1) ? v[static_cast<std::size_t>(i)] : -v[static_cast<std::size_t>(i)];
        }
        const int s = 2 * std::popcount(static_cast<std::uint64_t>(c)) - n;
        atoms[static_cast<std::size_t>(c)] = {loc, std::exp(log_weight(p, n, s) - shift)};
    }
    return normalize(std::move(atoms));
}

namespace serial {

AtomDistribution spin_sum_distribution(const ModelParams& p, std::span<const double> v) {
    check_vector(v);
    const int n = static_cast<int>(v.size());
    const double shift = max_log_weight(p, n);
    std::vector<Atom> atoms;
    std::vector<int> sigma(static_cast<std::size_t>(n), -1);
    // Gray-code-free odometer over {-1, +1}^n.
    while (true) {
        double loc = 0.0;
        int s = 0;
        for (int i = 0; i < n; ++i) {
            loc += sigma[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            s += sigma[static_cast<std::size_t>(i)];
        }
        atoms.push_back({loc, std::exp(log_weight(p, n, s) - shift)});
        int i = 0;
        while (i < n && sigma[static_cast<std::size_t>(i)] == 1) {
            sigma[static_cast<std::size_t>(i)] = -1;
            ++i;
        }
        if (i == n) {
            break;
        }
        sigma[static_cast<std::size_t>(i)] = 1;
    }
    return normalize(std::move(atoms));
}

}  // namespace serial

AtomDistribution grouped_spin_sum_distribution(const ModelParams& p,
                                               std::span<const WeightType> types) {
    int n = 0;
    for (const WeightType& t : types) {
        if (t.count < 0) {
            throw UsageError("grouped_spin_sum_distribution: negative count");
        }
        n += t.count;
    }
    if (n < 1) {
        throw UsageError("grouped_spin_sum_distribution: empty vector");
    }
    const double shift = max_log_weight(p, n);
    std::vector<std::vector<double>> choose(types.size());
    for (std::size_t j = 0; j < types.size(); ++j) {
        const int c = types[j].count;
        choose[j].resize(static_cast<std::size_t>(c + 1));
        for (int i = 0; i <= c; ++i) {
            choose[j][static_cast<std::size_t>(i)] =
                std::exp(static_cast<double>(log_binomial(c, i)));
        }
    }
    std::vector<Atom> atoms;
    std::vector<int> plus(types.size(), 0);
    while (true) {
        int k = 0;
        double loc = 0.0;
        double mult = 1.0;
        for (std::size_t j = 0; j < types.size(); ++j) {
            k += plus[j];
            loc += types[j].value * (2 * plus[j] - types[j].count);
            mult *= choose[j][static_cast<std::size_t>(plus[j])];
        }
        atoms.push_back({loc, mult * std::exp(log_weight(p, n, 2 * k - n) - shift)});
        std::size_t j = 0;
        while (j < types.size() && plus[j] == types[j].count) {
            plus[j] = 0;
            ++j;
        }
        if (j == types.size()) {
            break;
        }
        ++plus[j];
    }
    return normalize(std::move(atoms));
}

WindowSup brute_force_sup(const ModelParams& p, std::span<const double> v) {
    check_vector(v);
    for (double x : v) {
        if (!(std::fabs(x) >= 1.0)) {
            throw UsageError("brute_force_sup: weights need |v_i| >= 1");
        }
    }
    return window_sup(spin_sum_distribution(p, v));
}

namespace {

// All ways to write n as an ordered sum of `parts` non-negative integers.
void enumerate_counts(int n, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == parts - 1) {
        cur.push_back(n);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int c = 0; c <= n; ++c) {
        cur.push_back(c);
        enumerate_counts(n - c, parts, cur, out);
        cur.pop_back();
    }
}

std::vector<double> expand(std::span<const WeightType> types) {
    std::vector<double> v;
    for (const WeightType& t : types) {
        v.insert(v.end(), static_cast<std::size_t>(t.count), t.value);
    }
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

constexpr double kStateBudget = 5e8;

}  // namespace

QnSearchResult brute_force_qn(const ModelParams& p, int n, std::span<const double> weight_grid,
                              SignMode mode) {
    if (n < 1 || n > kMaxSearchN) {
        throw UsageError("brute_force_qn: need 1 <= n <= 12");
    }
    if (weight_grid.empty()) {
        throw UsageError("brute_force_qn: empty weight grid");
    }
    std::vector<double> values;
    for (double g : weight_grid) {
        if (!(g >= 1.0) || !std::isfinite(g)) {
            throw UsageError("brute_force_qn: grid values must be finite and >= 1");
        }
        values.push_back(g);
        if (mode == SignMode::Signed) {
            values.push_back(-g);
        }
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const int t = static_cast<int>(values.size());

    // States visited: Σ over multisets of Π(c_j + 1) = C(n + 2t - 1, 2t - 1).
    double states = 1.0;
    for (int i = 1; i <= 2 * t - 1; ++i) {
        states *= static_cast<double>(n + i) / i;
    }
    if (states > kStateBudget) {
        throw UsageError("brute_force_qn: combinatorial budget exceeded");
    }

    std::vector<std::vector<int>> multisets;
    std::vector<int> cur;
    enumerate_counts(n, t, cur, multisets);

    QnSearchResult r;
    r.multisets = static_cast<std::int64_t>(multisets.size());
    std::vector<WeightType> ref;
    if (mode == SignMode::Positive) {
        ref = {{1.0, n}};
    } else {
        ref = {{1.0, (n + 1) / 2}, {-1.0, n / 2}};
        if (n % 2 == 1) {
            // P_n's vector: (n-1)/2 plus weights and (n+1)/2 minus weights.
            ref = {{1.0, (n - 1) / 2}, {-1.0, (n + 1) / 2}};
        }
    }
    r.reference = window_sup(grouped_spin_sum_distribution(p, ref)).sup;
    r.reference_v = expand(ref);

    std::vector<double> sups(multisets.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t i = 0; i < multisets.size(); ++i) {
        std::vector<WeightType> types;
        for (int j = 0; j < t; ++j) {
            if (multisets[i][static_cast<std::size_t>(j)] > 0) {
                types.push_back({values[static_cast<std::size_t>(j)],
                                 multisets[i][static_cast<std::size_t>(j)]});
            }
        }
        sups[i] = window_sup(grouped_spin_sum_distribution(p, types)).sup;
    }

    r.best = r.reference;
    r.best_v = r.reference_v;
    r.max_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < multisets.size(); ++i) {
        r.max_excess = std::max(r.max_excess, sups[i] - r.reference);
        if (sups[i] > r.best + 1e-12) {
            r.best = sups[i];
            std::vector<WeightType> types;
            for (int j = 0; j < t; ++j) {
                types.push_back({values[static_cast<std::size_t>(j)],
                                 multisets[i][static_cast<std::size_t>(j)]});
            }
            r.best_v = expand(types);
        }
    }
    return r;
}

// ---------------------------------------------------------------- graphs

UnimodalWeights::UnimodalWeights(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw UsageError("UnimodalWeights: empty");
    }
    for (double v : values_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw UsageError("UnimodalWeights: values must be finite and non-negative");
        }
    }
    if (!is_unimodal(values_)) {
        throw UsageError("UnimodalWeights: values are not unimodal");
    }
}

bool UnimodalWeights::is_unimodal(std::span<const double> values) {
    std::size_t i = 1;
    while (i < values.size() && values[i] >= values[i - 1]) {
        ++i;
    }
    while (i < values.size() && values[i] <= values[i - 1]) {
        ++i;
    }
    return i >= values.size();
}

ShiftMax parallel_shift_max(const UnimodalWeights& f, const UnimodalWeights& g) {
    const auto& fv = f.values();
    const auto& gv = g.values();
    const auto nf = static_cast<std::int64_t>(fv.size());
    const auto ng = static_cast<std::int64_t>(gv.size());
    ShiftMax best{-1.0, 0};
    for (std::int64_t d = -(ng - 1); d <= nf - 1; ++d) {
        double s = 0.0;
        for (std::int64_t k = std::max<std::int64_t>(0, d); k < nf && k - d < ng; ++k) {
            s += fv[static_cast<std::size_t>(k)] * gv[static_cast<std::size_t>(k - d)];
        }
        if (s > best.max) {
            best = {s, d};
        }
    }
    return best;
}

double noncrossing_bruteforce(const UnimodalWeights& f, const UnimodalWeights& g) {
    if (f.size() > kMaxGraphSide || g.size() > kMaxGraphSide) {
        throw UsageError("noncrossing_bruteforce: sides limited to 9 vertices");
    }
    const auto& fv = f.values();
    const auto& gv = g.values();
    // best[m][k]: heaviest chain using g-vertices < m and f-vertices < k.
    std::vector<std::vector<double>> best(gv.size() + 1, std::vector<double>(fv.size() + 1, 0.0));
    for (std::size_t m = 1; m <= gv.size(); ++m) {
        for (std::size_t k = 1; k <= fv.size(); ++k) {
            best[m][k] = std::max({best[m - 1][k], best[m][k - 1],
                                   best[m - 1][k - 1] + fv[k - 1] * gv[m - 1]});
        }
    }
    return best[gv.size()][fv.size()];
}

namespace {

void chains_from(std::span<const double> f, std::span<const double> g, std::size_t m0,
                 std::size_t k0, double acc, double& best) {
    best = std::max(best, acc);
    for (std::size_t m = m0; m < g.size(); ++m) {
        for (std::size_t k = k0; k < f.size(); ++k) {
            chains_from(f, g, m + 1, k + 1, acc + f[k] * g[m], best);
        }
    }
}

}  // namespace

double noncrossing_exhaustive(std::span<const double> f, std::span<const double> g) {
    if (f.size() > kMaxGraphSide || g.size() > kMaxGraphSide) {
        throw UsageError("noncrossing_exhaustive: sides limited to 9 vertices");
    }
    double best = 0.0;
    chains_from(f, g, 0, 0, 0.0, best);
    return best;
}

// ---------------------------------------------------------------- fits

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 4) {
        throw UsageError("fit_power_law: need at least 4 samples");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [n, r] : samples) {
        if (!(n > 0.0) || !(r > 0.0)) {
            throw UsageError("fit_power_law: n and residuals must be positive");
        }
        const double x = std::log(n);
        const double y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(samples.size());
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) {
        throw UsageError("fit_power_law: all n are equal");
    }
    const double slope = (m * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / m};
}

// ---------------------------------------------------------------- quadrature oracles

namespace {

void check_quad_inputs(const ModelParams& p, double x) {
    if (!(p.beta() > 0.0)) {
        throw DomainError("quadrature oracle: requires beta > 0");
    }
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("quadrature oracle: requires x > 0");
    }
}

// exp(e) guarded so that underflow short-circuits before any singular factor.
inline double safe_exp(double e) { return e < -745.0 ? 0.0 : std::exp(e); }

double log_outer(const detail::PhiWindow& win, const std::function<double(double)>& f,
                 const QuadConfig& cfg) {
    QuadResult q = win.even ? integrate_peaks(f, win.peaks, cfg, 0.0)
                            : integrate_peaks(f, win.peaks, cfg);
    if (win.even) {
        q.value *= 2.0;
    }
    if (!(q.value > 0.0)) {
        throw QuadratureError("quadrature oracle: non-positive integral", q.value,
                              q.error_estimate);
    }
    return std::log(q.value);
}

double log_w_impl(const ModelParams& p, double x, const QuadConfig& cfg, bool with_rho) {
    check_quad_inputs(p, x);
    cfg.validate();
    const double inv_x2 = 1.0 / (x * x);
    const detail::PhiWindow win = detail::phi_window(p, inv_x2, !with_rho);
    const double pi = std::numbers::pi;
    const double edge_limit = cfg.abs_tol / 10.0;
    // Inner integral over u, even in u, so [0, U] is doubled.
    auto inner = [&](double t) {
        auto g = [&](double u) {
            const double e = safe_exp((psi(p, t, u) - win.phi_star) * inv_x2);
            if (e == 0.0) {
                return 0.0;
            }
            return with_rho ? e * rho(t, u) : e;
        };
        if (safe_exp((phi(p, t) - win.phi_star) * inv_x2) == 0.0) {
            return 0.0;
        }
        double u_max = std::min(pi, cfg.truncation_sigmas * 2.0 * x * std::cosh(t));
        while (u_max < pi && std::fabs(g(u_max)) >= edge_limit) {
            u_max = std::min(pi, 2.0 * u_max);
        }
        return 2.0 * integrate_interval(g, 0.0, u_max, cfg).value;
    };
    const double log_int = log_outer(win, inner, cfg);
    return win.phi_star * inv_x2 + log_int -
           std::log(std::pow(2.0 * pi, 1.5) * std::sqrt(2.0 * p.coupling()) * x);
}

}  // namespace

double quad_Z_of_x(const ModelParams& p, double x, const QuadConfig& cfg) {
    check_quad_inputs(p, x);
    cfg.validate();
    const double inv_x2 = 1.0 / (x * x);
    const detail::PhiWindow win = detail::phi_window(p, inv_x2);
    auto f = [&](double t) { return safe_exp((phi(p, t) - win.phi_star) * inv_x2); };
    const double log_int = log_outer(win, f, cfg);
    return win.phi_star * inv_x2 + log_int -
           std::log(2.0 * std::sqrt(std::numbers::pi * p.coupling()) * x);
}

double quad_W(const ModelParams& p, double x, const QuadConfig& cfg) {
    return log_w_impl(p, x, cfg, false);
}

double quad_W_odd(const ModelParams& p, double x, const QuadConfig& cfg) {
    return log_w_impl(p, x, cfg, true);
}

}  // namespace cwlo
