#pragma once

#include <cmath>
#include <concepts>
#include <optional>
#include <string_view>
#include <vector>

#include "cwlo/errors.hpp"

namespace cwlo {

// Curie–Weiss parameters: P(σ) ∝ exp((dβ/n)(Σσ)² + hΣσ).
class ModelParams {
public:
    ModelParams(int d, double beta, double h);

    int d() const { return d_; }
    double beta() const { return beta_; }
    double h() const { return h_; }
    double abs_h() const { return std::fabs(h_); }
    double beta_c() const { return 1.0 / (2.0 * d_); }
    // dβ, the coefficient of (Σσ)²/n.
    double coupling() const { return d_ * beta_; }
    // β/β_c = 2dβ.
    double kappa() const { return 2.0 * d_ * beta_; }

    ModelParams with_h(double h) const { return ModelParams(d_, beta_, h); }

private:
    int d_;
    double beta_;
    double h_;
};

double beta_critical(int d);

enum class Regime { HighTemp, Critical, LowTemp, Field };

inline constexpr double kRegimeTol = 1e-12;

std::string_view to_string(Regime r);
std::optional<Regime> parse_regime(std::string_view s);

Regime classify_regime(const ModelParams& p, double tol = kRegimeTol);

// ln cosh t = |t| + log1p(e^{-2|t|}) - ln 2; finite for every finite t.
template <std::floating_point T>
T log_cosh(T t) {
    using std::fabs, std::exp, std::log1p, std::log;
    const T a = fabs(t);
    return a + log1p(exp(T(-2) * a)) - log(T(2));
}

// φ(t) = ln cosh t - (t - |h|)²/(4dβ). Requires β > 0.
template <std::floating_point T>
T phi(const ModelParams& p, T t) {
    if (!(p.beta() > 0.0)) {
        throw DomainError("phi: requires beta > 0");
    }
    const T shift = t - static_cast<T>(p.abs_h());
    return log_cosh(t) - shift * shift / (T(4) * static_cast<T>(p.coupling()));
}

// ψ(t,u) = ½(ln(½cosh 2t + ½cos u) - (t-|h|)²/(2dβ)). Returns -inf at t=0, u=±π.
double psi(const ModelParams& p, double t, double u);

// ρ(t,u) = (e^{-t} + e^t cos u)/√(2cosh 2t + 2cos u).
double rho(double t, double u);

// s(m), the binary entropy of (1+m)/2 in nats.
double entropy_density(double m);

// f_CW(m) = -dβm² - |h|m - s(m).
double free_energy(const ModelParams& p, double m);

struct MeanFieldSolution {
    double z_star = 0.0;
    double t_star = 0.0;
    double residual = 0.0;
    std::vector<double> all_solutions;
};

inline constexpr double kMeanFieldTol = 1e-14;

// Roots of z = tanh(κz + |h|) on [-1,1]; z_star is the largest.
MeanFieldSolution solve_mean_field(const ModelParams& p, double tol = kMeanFieldTol);

// For h ≠ 0: the β above which the mean-field equation has three roots.
// Located by bisection on the sign of g at its local minimum.
double beta_zero(int d, double h);

}  // namespace cwlo
