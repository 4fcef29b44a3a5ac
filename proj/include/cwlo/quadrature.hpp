#pragma once

#include <functional>
#include <limits>
#include <span>

namespace cwlo {

struct QuadConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    // Maximum tanh-sinh refinement levels per panel.
    int max_subdivisions = 14;
    // Initial window half-width, in units of the peak's local scale.
    double truncation_sigmas = 14.0;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// A local maximum of a max-shifted integrand and the width of its bump.
struct Peak {
    double center;
    double scale;
};

// Tanh-sinh on [a, b]; endpoints are never evaluated.
QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadConfig& cfg);

// ∫ f over [lo, hi] (default ℝ) for an integrand concentrated near the given peaks.
// Each window starts at truncation_sigmas·scale and doubles until f at its edges falls
// below abs_tol/10; overlapping windows are merged into one panel.
QuadResult integrate_peaks(const std::function<double(double)>& f, std::span<const Peak> peaks,
                           const QuadConfig& cfg,
                           double lo = -std::numeric_limits<double>::infinity(),
                           double hi = std::numeric_limits<double>::infinity());

}  // namespace cwlo
