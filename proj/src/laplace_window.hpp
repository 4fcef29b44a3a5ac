#pragma once

#include <cmath>
#include <vector>

#include "cwlo/model.hpp"
#include "cwlo/quadrature.hpp"

namespace cwlo::detail {

// Where exp(n(φ(t) - φ(t*))) lives. With h = 0 and fold_even the integrand is taken to
// be even in t and only [0, ∞) is integrated (caller doubles).
struct PhiWindow {
    std::vector<Peak> peaks;
    bool even = false;
    double t_star = 0.0;
    double phi_star = 0.0;
};

inline PhiWindow phi_window(const ModelParams& p, double inv_x2, bool fold_even = true) {
    PhiWindow w;
    const MeanFieldSolution mf = solve_mean_field(p);
    w.t_star = mf.t_star;
    w.phi_star = phi(p, mf.t_star);
    w.even = fold_even && p.abs_h() == 0.0;
    // Every local maximum of φ gets a window; for h ≠ 0 above β₀ there is a
    // secondary one at negative t.
    for (double z : mf.all_solutions) {
        const double t = p.kappa() * z + p.abs_h();
        if (w.even && t < 0.0) {
            continue;
        }
        const double sech = 1.0 / std::cosh(t);
        const double two_a2 = sech * sech - 1.0 / (2.0 * p.coupling());
        const bool is_global = t == mf.t_star;
        if (two_a2 >= 0.0 && !is_global) {
            continue;
        }
        // Quartic width covers the critical point, where the quadratic term vanishes.
        double scale = std::pow(12.0 / inv_x2, 0.25);
        if (two_a2 < 0.0) {
            scale = std::min(scale, 1.0 / std::sqrt(-two_a2 * inv_x2));
        }
        w.peaks.push_back({t, scale});
    }
    return w;
}

}  // namespace cwlo::detail
