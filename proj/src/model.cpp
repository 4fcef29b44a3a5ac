#include "cwlo/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cwlo {

ModelParams::ModelParams(int d, double beta, double h) : d_(d), beta_(beta), h_(h) {
    if (d < 1) {
        throw DomainError("ModelParams: d must be a positive integer");
    }
    if (!std::isfinite(beta) || beta < 0.0) {
        throw DomainError("ModelParams: beta must be finite and non-negative");
    }
    if (!std::isfinite(h)) {
        throw DomainError("ModelParams: h must be finite");
    }
}

double beta_critical(int d) {
    if (d < 1) {
        throw DomainError("beta_critical: d must be positive");
    }
    return 1.0 / (2.0 * d);
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::HighTemp: return "HighTemp";
        case Regime::Critical: return "Critical";
        case Regime::LowTemp: return "LowTemp";
        case Regime::Field: return "Field";
    }
    return "?";
}

std::optional<Regime> parse_regime(std::string_view s) {
    for (Regime r : {Regime::HighTemp, Regime::Critical, Regime::LowTemp, Regime::Field}) {
        if (s == to_string(r)) {
            return r;
        }
    }
    return std::nullopt;
}

Regime classify_regime(const ModelParams& p, double tol) {
    if (tol < 0.0) {
        throw DomainError("classify_regime: tol must be non-negative");
    }
    if (p.abs_h() > tol) {
        return Regime::Field;
    }
    const double bc = p.beta_c();
    if (std::fabs(p.beta() - bc) <= tol * bc) {
        return Regime::Critical;
    }
    return p.beta() < bc ? Regime::HighTemp : Regime::LowTemp;
}

namespace {

// ln(½cosh 2t + ½cos u) using ½cosh 2t + ½cos u = sinh²t + cos²(u/2).
double log_c(double t, double u) {
    const double cu = std::cos(0.5 * u);
    if (std::fabs(t) < 1.0) {
        const double sh = std::sinh(t);
        return std::log(sh * sh + cu * cu);
    }
    const double su = std::sin(0.5 * u);
    const double sech = 1.0 / std::cosh(t);
    return 2.0 * log_cosh(t) + std::log1p(-su * su * sech * sech);
}

}  // namespace

double psi(const ModelParams& p, double t, double u) {
    if (!(p.beta() > 0.0)) {
        throw DomainError("psi: requires beta > 0");
    }
    const double lc = log_c(t, u);
    if (std::isinf(lc)) {
        return -std::numeric_limits<double>::infinity();
    }
    const double shift = t - p.abs_h();
    return 0.5 * (lc - shift * shift / (2.0 * p.coupling()));
}

double rho(double t, double u) {
    const double sh = std::sinh(t);
    const double cu = std::cos(0.5 * u);
    const double c = sh * sh + cu * cu;
    if (!(c > 0.0)) {
        throw DomainError("rho: singular at t=0, u=±pi");
    }
    return (std::exp(-t) + std::exp(t) * std::cos(u)) / (2.0 * std::sqrt(c));
}

double entropy_density(double m) {
    if (!(std::fabs(m) <= 1.0)) {
        throw DomainError("entropy_density: |m| must be at most 1");
    }
    auto xlogx_half = [](double one_plus) {
        // x ln x for x = one_plus/2
        if (one_plus == 0.0) {
            return 0.0;
        }
        const double x = 0.5 * one_plus;
        return x * std::log(x);
    };
    return -xlogx_half(1.0 + m) - xlogx_half(1.0 - m);
}

double free_energy(const ModelParams& p, double m) {
    return -p.coupling() * m * m - p.abs_h() * m - entropy_density(m);
}

namespace {

double g_mf(double kappa, double ah, double z) { return std::tanh(kappa * z + ah) - z; }

double gprime_mf(double kappa, double ah, double z) {
    const double s = 1.0 / std::cosh(kappa * z + ah);
    return kappa * s * s - 1.0;
}

constexpr int kMaxIter = 400;

// Bisection on [lo, hi] with g(lo) and g(hi) of opposite sign, then guarded Newton.
double refine_root(double kappa, double ah, double lo, double hi, double tol) {
    double glo = g_mf(kappa, ah, lo);
    int it = 0;
    for (; it < kMaxIter && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double gm = g_mf(kappa, ah, mid);
        if (gm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    double z = 0.5 * (lo + hi);
    for (int k = 0; k < 4; ++k) {
        const double gp = gprime_mf(kappa, ah, z);
        if (gp == 0.0) {
            break;
        }
        const double next = z - g_mf(kappa, ah, z) / gp;
        if (!(next >= lo - 1e-12 && next <= hi + 1e-12)) {
            break;
        }
        if (std::fabs(g_mf(kappa, ah, next)) > std::fabs(g_mf(kappa, ah, z))) {
            break;
        }
        z = next;
    }
    const double r = std::fabs(g_mf(kappa, ah, z));
    if (r > tol) {
        throw SolverError("solve_mean_field: residual above tolerance after refinement", z, r,
                          it);
    }
    return z;
}

}  // namespace

MeanFieldSolution solve_mean_field(const ModelParams& p, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("solve_mean_field: tol must be positive");
    }
    const double kappa = p.kappa();
    const double ah = p.abs_h();
    MeanFieldSolution sol;

    if (ah == 0.0 && kappa <= 1.0) {
        sol.z_star = 0.0;
        sol.t_star = 0.0;
        sol.residual = 0.0;
        sol.all_solutions = {0.0};
        return sol;
    }

    if (ah == 0.0) {
        // g > 0 just right of 0, g(1) < 0.
        const double zc = std::acosh(std::sqrt(kappa)) / kappa;
        const double z = refine_root(kappa, 0.0, zc, 1.0, tol);
        sol.all_solutions = {-z, 0.0, z};
        sol.z_star = z;
    } else {
        // Breakpoints of monotonicity of g.
        std::vector<double> cuts = {-1.0};
        if (kappa > 1.0) {
            const double a = std::acosh(std::sqrt(kappa));
            for (double c : {(-a - ah) / kappa, (a - ah) / kappa}) {
                if (c > -1.0 && c < 1.0) {
                    cuts.push_back(c);
                }
            }
        }
        cuts.push_back(1.0);
        std::vector<double> roots;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double glo = g_mf(kappa, ah, cuts[i]);
            const double ghi = g_mf(kappa, ah, cuts[i + 1]);
            if ((glo > 0.0 && ghi < 0.0) || (glo < 0.0 && ghi > 0.0)) {
                roots.push_back(refine_root(kappa, ah, cuts[i], cuts[i + 1], tol));
            }
            if (i > 0 && std::fabs(glo) <= tol) {
                // Tangential root at an interior breakpoint.
                roots.push_back(cuts[i]);
            }
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end(),
                                [](double a, double b) { return std::fabs(a - b) < 1e-7; }),
                    roots.end());
        if (roots.empty()) {
            throw SolverError("solve_mean_field: no sign change found", 0.0,
                              g_mf(kappa, ah, 0.0), 0);
        }
        sol.all_solutions = roots;
        sol.z_star = roots.back();
    }
    sol.t_star = kappa * sol.z_star + ah;
    sol.residual = std::fabs(g_mf(kappa, ah, sol.z_star));
    return sol;
}

double beta_zero(int d, double h) {
    const double ah = std::fabs(h);
    if (ah == 0.0) {
        throw DomainError("beta_zero: defined only for h != 0");
    }
    // Sign of g at its left local minimum; negative means three roots.
    auto gmin = [&](double beta) {
        const double kappa = 2.0 * d * beta;
        if (kappa <= 1.0) {
            return 1.0;
        }
        const double zm = (-std::acosh(std::sqrt(kappa)) - ah) / kappa;
        if (zm <= -1.0) {
            return 1.0;
        }
        return g_mf(kappa, ah, zm);
    };
    const double bc = beta_critical(d);
    double lo = bc;
    double hi = 2.0 * bc;
    int guard = 0;
    while (gmin(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200) {
            throw SolverError("beta_zero: failed to bracket threshold", hi, gmin(hi), guard);
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gmin(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace cwlo
