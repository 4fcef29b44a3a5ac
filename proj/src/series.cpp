#include "cwlo/series.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cwlo {

// ---------------------------------------------------------------- Rational

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw UsageError("Rational: zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = g == 0 ? 0 : num / g;
    den_ = g == 0 ? 1 : den / g;
}

std::string Rational::str() const {
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& s) {
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos) {
            std::size_t used = 0;
            const long long v = std::stoll(s, &used);
            if (used != s.size()) {
                throw UsageError("Rational::parse: trailing characters in '" + s + "'");
            }
            return Rational(v);
        }
        std::size_t used_n = 0;
        std::size_t used_d = 0;
        const std::string ns = s.substr(0, slash);
        const std::string ds = s.substr(slash + 1);
        const long long n = std::stoll(ns, &used_n);
        const long long d = std::stoll(ds, &used_d);
        if (used_n != ns.size() || used_d != ds.size()) {
            throw UsageError("Rational::parse: malformed '" + s + "'");
        }
        return Rational(n, d);
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const UsageError*>(&e) != nullptr) {
            throw;
        }
        throw UsageError("Rational::parse: malformed '" + s + "'");
    }
}

Rational operator+(Rational a, Rational b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(Rational a, Rational b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

bool operator<(Rational a, Rational b) { return a.num_ * b.den_ < b.num_ * a.den_; }

// ---------------------------------------------------------------- BiSeries

BiSeries::BiSeries(double t_center, double u_center, int degree)
    : t_center_(t_center), u_center_(u_center), degree_(degree),
      data_(static_cast<std::size_t>((degree + 1) * (degree + 1)), 0.0) {
    if (degree < 0) {
        throw UsageError("BiSeries: negative degree");
    }
}

double BiSeries::at(int p, int q) const {
    if (p < 0 || q < 0 || p + q > degree_) {
        return 0.0;
    }
    return data_[static_cast<std::size_t>(p * (degree_ + 1) + q)];
}

double& BiSeries::at(int p, int q) {
    if (p < 0 || q < 0 || p + q > degree_) {
        throw UsageError("BiSeries::at: index beyond total degree");
    }
    return data_[static_cast<std::size_t>(p * (degree_ + 1) + q)];
}

BiSeries BiSeries::operator*(const BiSeries& o) const {
    if (o.degree_ != degree_) {
        throw UsageError("BiSeries: degree mismatch");
    }
    BiSeries r(t_center_, u_center_, degree_);
    for (int p1 = 0; p1 <= degree_; ++p1) {
        for (int q1 = 0; p1 + q1 <= degree_; ++q1) {
            const double a = at(p1, q1);
            if (a == 0.0) {
                continue;
            }
            for (int p2 = 0; p1 + q1 + p2 <= degree_; ++p2) {
                for (int q2 = 0; p1 + q1 + p2 + q2 <= degree_; ++q2) {
                    r.at(p1 + p2, q1 + q2) += a * o.at(p2, q2);
                }
            }
        }
    }
    return r;
}

BiSeries& BiSeries::operator+=(const BiSeries& o) {
    if (o.degree_ != degree_) {
        throw UsageError("BiSeries: degree mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

BiSeries& BiSeries::operator*=(double s) {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

// ---------------------------------------------------------------- Taylor engines

namespace {

using Poly = std::vector<__int128>;

// P_k(u) with d^k/dt^k ln cosh t = P_k(tanh t); P_1 = u, P_{k+1} = (1-u²)P_k'.
const std::vector<Poly>& log_cosh_derivative_polys() {
    static const std::vector<Poly> table = [] {
        std::vector<Poly> t(kMaxPhiOrder + 1);
        t[1] = {0, 1};
        for (int k = 1; k < kMaxPhiOrder; ++k) {
            const Poly& pk = t[static_cast<std::size_t>(k)];
            Poly deriv(pk.size() > 1 ? pk.size() - 1 : 1, 0);
            for (std::size_t i = 1; i < pk.size(); ++i) {
                deriv[i - 1] = pk[i] * static_cast<__int128>(i);
            }
            Poly next(deriv.size() + 2, 0);
            for (std::size_t i = 0; i < deriv.size(); ++i) {
                next[i] += deriv[i];
                next[i + 2] -= deriv[i];
            }
            t[static_cast<std::size_t>(k + 1)] = next;
        }
        return t;
    }();
    return table;
}

long double factorial_l(int k) {
    long double f = 1.0L;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

double double_factorial(int m) {
    double r = 1.0;
    for (int i = m; i > 1; i -= 2) {
        r *= i;
    }
    return r;
}

void require_beta(const ModelParams& p, const char* who) {
    if (!(p.beta() > 0.0)) {
        throw DomainError(std::string(who) + ": requires beta > 0");
    }
}

// Field term -(t0 + τ - |h|)²/(4dβ) added to coefficients of orders 0..2.
void add_field_term(const ModelParams& p, double t0, double& c0, double& c1, double& c2) {
    const double inv = 1.0 / (4.0 * p.coupling());
    const double s = t0 - p.abs_h();
    c0 -= s * s * inv;
    c1 -= 2.0 * s * inv;
    c2 -= inv;
}

// Series of ½ ln(½cosh 2(t0+τ) + ½cos u) in (τ, u).
BiSeries half_log_c_series(double t0, int degree) {
    // c/cosh²t0 = 1 + w with
    //   w = (1 - ½sech²t0)(cosh 2τ - 1) + tanh t0 · sinh 2τ + ½sech²t0 (cos u - 1).
    const double sech = 1.0 / std::cosh(t0);
    const double sech2 = sech * sech;
    const double th = std::tanh(t0);
    BiSeries w(t0, 0.0, degree);
    for (int j = 1; j <= degree; ++j) {
        const double tj = std::pow(2.0, j) / static_cast<double>(factorial_l(j));
        w.at(j, 0) = (j % 2 == 0) ? (1.0 - 0.5 * sech2) * tj : th * tj;
        if (j % 2 == 0) {
            const double sign = (j / 2) % 2 == 0 ? 1.0 : -1.0;
            w.at(0, j) = 0.5 * sech2 * sign / static_cast<double>(factorial_l(j));
        }
    }
    // ln(1 + w) = Σ_k (-1)^{k+1} w^k / k; w has no constant term.
    BiSeries result(t0, 0.0, degree);
    BiSeries power = w;
    for (int k = 1; k <= degree; ++k) {
        BiSeries term = power;
        term *= ((k % 2 == 1) ? 1.0 : -1.0) / k;
        result += term;
        power = power * w;
    }
    result *= 0.5;
    result.at(0, 0) += static_cast<double>(log_cosh(static_cast<long double>(t0)));
    return result;
}

}  // namespace

std::vector<double> log_cosh_taylor(double t0, int order) {
    if (order < 0 || order > kMaxPhiOrder) {
        throw UsageError("log_cosh_taylor: order must be in [0, 24]");
    }
    const auto& polys = log_cosh_derivative_polys();
    const long double u = std::tanh(static_cast<long double>(t0));
    std::vector<double> a(static_cast<std::size_t>(order + 1), 0.0);
    a[0] = static_cast<double>(log_cosh(static_cast<long double>(t0)));
    for (int k = 1; k <= order; ++k) {
        const Poly& pk = polys[static_cast<std::size_t>(k)];
        long double v = 0.0L;
        for (std::size_t i = pk.size(); i-- > 0;) {
            v = v * u + static_cast<long double>(pk[i]);
        }
        a[static_cast<std::size_t>(k)] = static_cast<double>(v / factorial_l(k));
    }
    return a;
}

UniSeries taylor_phi_at(const ModelParams& p, double t0, int order) {
    require_beta(p, "taylor_phi_at");
    if (order < 2 || order > kMaxPhiOrder) {
        throw UsageError("taylor_phi_at: order must be in [2, 24]");
    }
    UniSeries s;
    s.center = t0;
    s.coeffs = log_cosh_taylor(t0, order);
    add_field_term(p, t0, s.coeffs[0], s.coeffs[1], s.coeffs[2]);
    s.coeffs[0] = static_cast<double>(phi(p, static_cast<long double>(t0)));
    return s;
}

BiSeries taylor_psi_at(const ModelParams& p, double t0, int total_degree) {
    require_beta(p, "taylor_psi_at");
    if (total_degree < 2 || total_degree > kMaxPsiDegree) {
        throw UsageError("taylor_psi_at: total degree must be in [2, 12]");
    }
    BiSeries s = half_log_c_series(t0, total_degree);
    add_field_term(p, t0, s.at(0, 0), s.at(1, 0), s.at(2, 0));
    return s;
}

std::string_view to_string(LadderKind k) {
    switch (k) {
        case LadderKind::Z: return "Z";
        case LadderKind::O: return "O";
        case LadderKind::Qn: return "Qn";
        case LadderKind::QnPlus: return "QnPlus";
    }
    return "?";
}

double ExpansionCoeffs::ladder_sum(double n, int last) const {
    const int end = last < 0 ? static_cast<int>(values.size()) - 1
                             : std::min(last, static_cast<int>(values.size()) - 1);
    long double s = 0.0L;
    for (int i = 0; i <= end; ++i) {
        s += static_cast<long double>(values[static_cast<std::size_t>(i)]) *
             std::pow(static_cast<long double>(n),
                      static_cast<long double>(powers[static_cast<std::size_t>(i)].num()) /
                          powers[static_cast<std::size_t>(i)].den());
    }
    return static_cast<double>(s);
}

Regime resolve_regime(const ModelParams& p, std::optional<Regime> forced) {
    return forced ? *forced : classify_regime(p);
}

// ---------------------------------------------------------------- coefficient formulas

namespace {

constexpr long double kLn2 = std::numbers::ln2_v<long double>;

// comp[k][S]: sum over compositions m_1 + ... + m_k = S (m_i ≥ 1) of Π w[m_i].
std::vector<std::vector<double>> composition_sums(const std::vector<double>& w, int s_max,
                                                  int k_max) {
    std::vector<std::vector<double>> comp(static_cast<std::size_t>(k_max + 1),
                                          std::vector<double>(static_cast<std::size_t>(s_max + 1), 0.0));
    comp[0][0] = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        for (int s = 1; s <= s_max; ++s) {
            double acc = 0.0;
            for (int m = 1; m <= s && m < static_cast<int>(w.size()); ++m) {
                acc += w[static_cast<std::size_t>(m)] *
                       comp[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s - m)];
            }
            comp[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] = acc;
        }
    }
    return comp;
}

// Bivariate analogue: G[k][P][Q] = Σ over k-tuples of parts (p_i, q_i) with
// Σp_i = P, Σq_i = Q of Π weight(p_i, q_i).
struct Part {
    int p;
    int q;
    double weight;
};

using Grid3 = std::vector<std::vector<std::vector<double>>>;

Grid3 part_sums(const std::vector<Part>& parts, int k_max, int p_max, int q_max) {
    Grid3 g(static_cast<std::size_t>(k_max + 1),
            std::vector<std::vector<double>>(static_cast<std::size_t>(p_max + 1),
                                             std::vector<double>(static_cast<std::size_t>(q_max + 1), 0.0)));
    g[0][0][0] = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        for (int P = 0; P <= p_max; ++P) {
            for (int Q = 0; Q <= q_max; ++Q) {
                double acc = 0.0;
                for (const Part& part : parts) {
                    if (part.p <= P && part.q <= Q) {
                        acc += part.weight * g[static_cast<std::size_t>(k - 1)]
                                              [static_cast<std::size_t>(P - part.p)]
                                              [static_cast<std::size_t>(Q - part.q)];
                    }
                }
                g[static_cast<std::size_t>(k)][static_cast<std::size_t>(P)]
                 [static_cast<std::size_t>(Q)] = acc;
            }
        }
    }
    return g;
}

double at3(const Grid3& g, int k, int P, int Q) {
    if (k < 0 || P < 0 || Q < 0 || k >= static_cast<int>(g.size()) ||
        P >= static_cast<int>(g[0].size()) || Q >= static_cast<int>(g[0][0].size())) {
        return 0.0;
    }
    return g[static_cast<std::size_t>(k)][static_cast<std::size_t>(P)][static_cast<std::size_t>(Q)];
}

// Non-degenerate maximizer t* for the non-critical formulas.
struct Tilt {
    double t_star;
    long double prefactor_log;
};

Tilt tilt_for(const ModelParams& p, Regime r) {
    if (r == Regime::HighTemp || r == Regime::Critical) {
        return {0.0, kLn2};
    }
    if (p.beta() == 0.0) {
        return {p.abs_h(), kLn2 + log_cosh(static_cast<long double>(p.abs_h()))};
    }
    const double t = solve_mean_field(p).t_star;
    return {t, kLn2 + phi(p, static_cast<long double>(t))};
}

void check_order(int M, int max, const char* who) {
    if (M < 0 || M > max) {
        throw UsageError(std::string(who) + ": M must be in [0, " + std::to_string(max) + "]");
    }
}

}  // namespace

ExpansionCoeffs e_coeffs(const ModelParams& p, int M, std::optional<Regime> forced) {
    check_order(M, kMaxZOrder, "e_coeffs");
    const Regime r = resolve_regime(p, forced);
    const Tilt tilt = tilt_for(p, r);
    ExpansionCoeffs out;
    out.regime = r;
    out.kind = LadderKind::Z;
    out.prefactor_log = tilt.prefactor_log;
    out.t_star = tilt.t_star;

    if (r == Regime::Critical) {
        // (1/√(2π))(3/4)^{1/4} Σ_k 12^{p/2+k} Γ(p/2+k+1/4)/k! · Σ_comp Π a_{2m_i+4}
        const std::vector<double> ell = log_cosh_taylor(0.0, 2 * M + 4);
        std::vector<double> w(static_cast<std::size_t>(M + 1), 0.0);
        for (int m = 1; m <= M; ++m) {
            w[static_cast<std::size_t>(m)] = ell[static_cast<std::size_t>(2 * m + 4)];
        }
        const auto comp = composition_sums(w, M, M);
        const double c = std::pow(0.75, 0.25) / std::sqrt(2.0 * std::numbers::pi);
        for (int q = 0; q <= M; ++q) {
            double v = 0.0;
            if (q == 0) {
                v = std::tgamma(0.25);
            }
            for (int k = 1; k <= q; ++k) {
                const double x = 0.5 * q + k;
                v += std::pow(12.0, x) * std::tgamma(x + 0.25) /
                     static_cast<double>(factorial_l(k)) *
                     comp[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
            }
            out.values.push_back(c * v);
            out.powers.emplace_back(1 - 2 * q, 4);
        }
        return out;
    }

    if (r == Regime::HighTemp) {
        // (1-κ)^{-1/2} and Σ_k (2q+2k-1)!! κ^{q+k} (1-κ)^{-(2q+2k+1)/2}/k! · Σ_comp Π ℓ_{2(m_i+1)}
        const double kappa = p.kappa();
        if (!(kappa < 1.0)) {
            throw DomainError("e_coeffs: HighTemp formula requires 2d*beta < 1");
        }
        const std::vector<double> ell = log_cosh_taylor(0.0, 2 * M + 2);
        std::vector<double> w(static_cast<std::size_t>(M + 1), 0.0);
        for (int m = 1; m <= M; ++m) {
            w[static_cast<std::size_t>(m)] = ell[static_cast<std::size_t>(2 * (m + 1))];
        }
        const auto comp = composition_sums(w, M, M);
        for (int q = 0; q <= M; ++q) {
            double v = q == 0 ? std::pow(1.0 - kappa, -0.5) : 0.0;
            for (int k = 1; k <= q; ++k) {
                v += double_factorial(2 * q + 2 * k - 1) * std::pow(kappa, q + k) *
                     std::pow(1.0 - kappa, -(2.0 * q + 2.0 * k + 1.0) / 2.0) /
                     static_cast<double>(factorial_l(k)) *
                     comp[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
            }
            out.values.push_back(v);
            out.powers.emplace_back(-q);
        }
        return out;
    }

    if (p.beta() == 0.0) {
        // Independent spins: Z = (2cosh h)^n exactly.
        for (int q = 0; q <= M; ++q) {
            out.values.push_back(q == 0 ? 1.0 : 0.0);
            out.powers.emplace_back(-q);
        }
        return out;
    }

    // LowTemp / Field: pref · Σ_{k=1}^{2q} (2q+2k-1)!!/k! (-2a₂)^{-(q+k)} Σ_comp Π a_{m_i+2}
    const UniSeries a = taylor_phi_at(p, tilt.t_star, 2 * M + 2);
    const double a2 = a.coeffs[2];
    if (!(a2 < 0.0)) {
        throw DomainError("e_coeffs: maximizer is degenerate (a_2 >= 0)");
    }
    const double db = p.coupling();
    const double pref = r == Regime::LowTemp ? std::pow(-db * a2, -0.5)
                                             : std::pow(-4.0 * db * a2, -0.5);
    std::vector<double> w(static_cast<std::size_t>(2 * M + 1), 0.0);
    for (int m = 1; m <= 2 * M; ++m) {
        w[static_cast<std::size_t>(m)] = a.coeffs[static_cast<std::size_t>(m + 2)];
    }
    const auto comp = composition_sums(w, 2 * M, 2 * M);
    for (int q = 0; q <= M; ++q) {
        double v = q == 0 ? 1.0 : 0.0;
        for (int k = 1; k <= 2 * q; ++k) {
            v += double_factorial(2 * q + 2 * k - 1) / static_cast<double>(factorial_l(k)) *
                 std::pow(-2.0 * a2, -static_cast<double>(q + k)) *
                 comp[static_cast<std::size_t>(k)][static_cast<std::size_t>(2 * q)];
        }
        out.values.push_back(pref * v);
        out.powers.emplace_back(-q);
    }
    return out;
}

ExpansionCoeffs gamma_coeffs(const ModelParams& p, int M, std::optional<Regime> forced) {
    check_order(M, kMaxGammaOrder, "gamma_coeffs");
    const Regime r = resolve_regime(p, forced);
    const Tilt tilt = tilt_for(p, r);
    ExpansionCoeffs out;
    out.regime = r;
    out.kind = LadderKind::O;
    out.prefactor_log = tilt.prefactor_log;
    out.t_star = tilt.t_star;
    const double pi = std::numbers::pi;

    if (r == Regime::Critical) {
        // Parts (i, j) stand for t^{2i}u^{2j} with i + 2j ≥ 3.
        const int degree = 2 * M + 6;
        const BiSeries alpha = taylor_psi_at(p, 0.0, degree);
        std::vector<Part> parts;
        for (int i = 0; 2 * i <= degree; ++i) {
            for (int j = 0; 2 * i + 2 * j <= degree; ++j) {
                if (i + 2 * j >= 3) {
                    parts.push_back({i, j, alpha.at(2 * i, 2 * j)});
                }
            }
        }
        const int p_max = 3 * M + 1;
        const Grid3 g = part_sums(parts, M, p_max, p_max);
        const double norm = std::pow(2.0 * pi, -1.5);
        for (int q = 0; q <= M; ++q) {
            double v = 0.0;
            for (int k = 0; k <= q; ++k) {
                if (q > 0 && k == 0) {
                    continue;
                }
                for (int P = 0; P <= p_max; ++P) {
                    const int twice_q = q + 2 * k - P;
                    if (twice_q < 0 || twice_q % 2 != 0) {
                        continue;
                    }
                    const int Q = twice_q / 2;
                    const double gk = at3(g, k, P, Q);
                    if (gk == 0.0) {
                        continue;
                    }
                    v += gk / static_cast<double>(factorial_l(k)) * std::pow(3.0, 0.5 * P + 0.25) *
                         std::pow(2.0, P + 3 * Q + 1) * std::tgamma(0.5 * P + 0.25) *
                         std::tgamma(Q + 0.5);
                }
            }
            out.values.push_back(norm * v);
            out.powers.emplace_back(-1 - 2 * q, 4);
        }
        return out;
    }

    if (p.beta() == 0.0) {
        // Only the u-integral remains: (1/2π)∫ exp(n·½ln(½cosh 2h + ½cos u)) du.
        const int degree = 2 * M + 4;
        const BiSeries c = half_log_c_series(p.abs_h(), degree);
        const double a02 = c.at(0, 2);
        std::vector<Part> parts;
        for (int j = 3; j <= degree; ++j) {
            parts.push_back({0, j, c.at(0, j)});
        }
        const int q_max = 6 * M;
        const Grid3 g = part_sums(parts, 2 * M, 0, q_max);
        for (int q = 0; q <= M; ++q) {
            double v = q == 0 ? std::tgamma(0.5) * std::pow(-a02, -0.5) : 0.0;
            for (int k = 1; k <= 2 * q; ++k) {
                const int Q = 2 * (k + q);
                v += at3(g, k, 0, Q) / static_cast<double>(factorial_l(k)) *
                     std::pow(-a02, -(Q + 1) / 2.0) * std::tgamma((Q + 1) / 2.0);
            }
            out.values.push_back(v / (2.0 * pi));
            out.powers.emplace_back(-2 * q - 1, 2);
        }
        return out;
    }

    const int degree = 2 * M + 4;
    const BiSeries alpha = taylor_psi_at(p, tilt.t_star, degree);
    const double a20 = alpha.at(2, 0);
    const double a02 = alpha.at(0, 2);
    if (!(a20 < 0.0 && a02 < 0.0)) {
        throw DomainError("gamma_coeffs: maximizer is degenerate");
    }
    std::vector<Part> parts;
    for (int i = 0; i <= degree; ++i) {
        for (int j = 0; i + j <= degree; ++j) {
            if (i + j >= 3) {
                parts.push_back({i, j, alpha.at(i, j)});
            }
        }
    }
    const int deg_max = 6 * M;
    const Grid3 g = part_sums(parts, 2 * M, deg_max, deg_max);
    const double bumps = r == Regime::LowTemp ? 2.0 : 1.0;
    const double pref = bumps / (std::pow(2.0 * pi, 1.5) * std::sqrt(2.0 * p.coupling()));
    for (int q = 0; q <= M; ++q) {
        double v = q == 0 ? pi * std::pow(a20 * a02, -0.5) : 0.0;
        for (int k = 1; k <= 2 * q; ++k) {
            const int total = 2 * (k + q);
            for (int P = 0; P <= total; P += 2) {
                const int Q = total - P;
                const double gk = at3(g, k, P, Q);
                if (gk == 0.0) {
                    continue;
                }
                v += gk / static_cast<double>(factorial_l(k)) *
                     std::pow(-a20, -(P + 1) / 2.0) * std::pow(-a02, -(Q + 1) / 2.0) *
                     std::tgamma((P + 1) / 2.0) * std::tgamma((Q + 1) / 2.0);
            }
        }
        out.values.push_back(pref * v);
        out.powers.emplace_back(-2 * q - 1, 2);
    }
    return out;
}

ExpansionCoeffs qn_coeffs(const ModelParams& p, int M, std::optional<Regime> forced) {
    check_order(M, kMaxGammaOrder, "qn_coeffs");
    const ExpansionCoeffs e = e_coeffs(p, M, forced);
    const ExpansionCoeffs g = gamma_coeffs(p, M, forced);
    ExpansionCoeffs out;
    out.regime = e.regime;
    out.kind = LadderKind::Qn;
    out.prefactor_log = 0.0L;
    out.t_star = e.t_star;
    // Both ladders step by the same power of n, so H is their formal quotient.
    for (int j = 0; j <= M; ++j) {
        double v = g.values[static_cast<std::size_t>(j)];
        for (int i = 1; i <= j; ++i) {
            v -= e.values[static_cast<std::size_t>(i)] * out.values[static_cast<std::size_t>(j - i)];
        }
        out.values.push_back(v / e.values[0]);
        out.powers.push_back(g.powers[static_cast<std::size_t>(j)] - e.powers[0]);
    }
    return out;
}

PowerLaw qn_plus_asymptotic(const ModelParams& p, std::optional<Regime> forced) {
    const Regime r = resolve_regime(p, forced);
    const double pi = std::numbers::pi;
    const double kappa = p.kappa();
    switch (r) {
        case Regime::HighTemp:
            return {std::sqrt(2.0 * (1.0 - kappa) / pi), Rational(-1, 2)};
        case Regime::Critical:
            return {2.0 / (std::pow(0.75, 0.25) * std::tgamma(0.25)), Rational(-3, 4)};
        case Regime::LowTemp:
        case Regime::Field: {
            const double z = solve_mean_field(p).z_star;
            const double s = 1.0 / (1.0 - z * z) - kappa;
            const double c = r == Regime::LowTemp ? std::sqrt(s / (2.0 * pi))
                                                  : std::sqrt(2.0 * s / pi);
            return {c, Rational(-1, 2)};
        }
    }
    throw UsageError("qn_plus_asymptotic: unknown regime");
}

ExpansionCoeffs qn_plus_coeffs(const ModelParams& p, std::optional<Regime> forced) {
    const PowerLaw law = qn_plus_asymptotic(p, forced);
    ExpansionCoeffs out;
    out.regime = resolve_regime(p, forced);
    out.kind = LadderKind::QnPlus;
    out.t_star = tilt_for(p, out.regime).t_star;
    out.values = {law.constant};
    out.powers = {law.exponent};
    return out;
}

long double predict_log(const ExpansionCoeffs& c, std::int64_t n, int last) {
    if (n < 1) {
        throw UsageError("predict: n must be positive");
    }
    const long double s = c.ladder_sum(static_cast<double>(n), last);
    if (c.kind == LadderKind::Z || c.kind == LadderKind::O) {
        return static_cast<long double>(n) * c.prefactor_log + std::log(s);
    }
    return std::log(s);
}

double predict(const ExpansionCoeffs& c, std::int64_t n, int last) {
    if (c.kind == LadderKind::Z || c.kind == LadderKind::O) {
        return static_cast<double>(std::exp(predict_log(c, n, last)));
    }
    if (n < 1) {
        throw UsageError("predict: n must be positive");
    }
    return c.ladder_sum(static_cast<double>(n), last);
}

}  // namespace cwlo
