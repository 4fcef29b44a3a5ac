#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwlo/model.hpp"

namespace cwlo {

// Reduced fraction with positive denominator; used for exponents of n.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    // "p/q", or "p" when q = 1.
    std::string str() const;
    static Rational parse(const std::string& s);

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend bool operator==(Rational a, Rational b) = default;
    friend bool operator<(Rational a, Rational b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// coeffs[p] multiplies (t - center)^p.
struct UniSeries {
    double center = 0.0;
    std::vector<double> coeffs;
};

// Dense bivariate Taylor data; at(p, q) multiplies (t - t_center)^p (u - u_center)^q,
// stored for p + q ≤ degree.
class BiSeries {
public:
    BiSeries() = default;
    BiSeries(double t_center, double u_center, int degree);

    double t_center() const { return t_center_; }
    double u_center() const { return u_center_; }
    int degree() const { return degree_; }

    double at(int p, int q) const;
    double& at(int p, int q);

    // Truncated product; both operands must share the degree.
    BiSeries operator*(const BiSeries& o) const;
    BiSeries& operator+=(const BiSeries& o);
    BiSeries& operator*=(double s);

private:
    double t_center_ = 0.0;
    double u_center_ = 0.0;
    int degree_ = 0;
    std::vector<double> data_;
};

inline constexpr int kMaxPhiOrder = 24;
inline constexpr int kMaxPsiDegree = 12;
inline constexpr int kMaxZOrder = 4;
inline constexpr int kMaxGammaOrder = 2;

// Taylor coefficients of φ at t0 up to the given order.
UniSeries taylor_phi_at(const ModelParams& p, double t0, int order);

// Taylor coefficients of ψ at (t0, 0) up to the given total degree.
BiSeries taylor_psi_at(const ModelParams& p, double t0, int total_degree);

// Coefficients a_p of ln cosh at t0 (no field term); order ≤ kMaxPhiOrder.
std::vector<double> log_cosh_taylor(double t0, int order);

enum class LadderKind { Z, O, Qn, QnPlus };

std::string_view to_string(LadderKind k);

// values[i]·n^{powers[i]}, optionally scaled by exp(n·prefactor_log):
//   Z ≈ exp(n·prefactor_log)·Σ e_p n^{power_p}, same for O with γ_p,
//   Q_n ≈ Σ H_p n^{power_p}, Q_n⁺ ≈ C n^{power_0}.
struct ExpansionCoeffs {
    Regime regime = Regime::HighTemp;
    LadderKind kind = LadderKind::Z;
    // Per-site log prefactor: ln 2 + φ(t*) for Z and O, 0 for Q_n and Q_n⁺.
    long double prefactor_log = 0.0L;
    double t_star = 0.0;
    std::vector<Rational> powers;
    std::vector<double> values;

    // Σ_{i ≤ last} values[i]·n^{powers[i]}; last = -1 means all terms.
    double ladder_sum(double n, int last = -1) const;
};

// Regime used by the coefficient formulas: the forced one if given, else classified.
Regime resolve_regime(const ModelParams& p, std::optional<Regime> forced);

ExpansionCoeffs e_coeffs(const ModelParams& p, int M, std::optional<Regime> forced = {});
ExpansionCoeffs gamma_coeffs(const ModelParams& p, int M, std::optional<Regime> forced = {});
ExpansionCoeffs qn_coeffs(const ModelParams& p, int M, std::optional<Regime> forced = {});

struct PowerLaw {
    double constant = 0.0;
    Rational exponent;
};

// Leading asymptotics of Q_n⁺.
PowerLaw qn_plus_asymptotic(const ModelParams& p, std::optional<Regime> forced = {});
ExpansionCoeffs qn_plus_coeffs(const ModelParams& p, std::optional<Regime> forced = {});

// Ladder evaluated at n through index `last` (-1: all). For Z and O this includes
// exp(n·prefactor_log) and can overflow; use predict_log there.
double predict(const ExpansionCoeffs& c, std::int64_t n, int last = -1);
long double predict_log(const ExpansionCoeffs& c, std::int64_t n, int last = -1);

}  // namespace cwlo
