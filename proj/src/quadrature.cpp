#include "cwlo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cwlo/errors.hpp"

namespace cwlo {

void QuadConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw UsageError("QuadConfig: tolerances must be positive");
    }
    if (max_subdivisions < 1 || max_subdivisions > 30) {
        throw UsageError("QuadConfig: max_subdivisions must be in [1, 30]");
    }
    if (!(truncation_sigmas > 0.0)) {
        throw UsageError("QuadConfig: truncation_sigmas must be positive");
    }
}

namespace {

using Integrator = boost::math::quadrature::tanh_sinh<double>;

// Abscissa tables are costly to build; keep one per refinement depth per thread.
Integrator& integrator_for(int levels) {
    thread_local std::map<int, std::unique_ptr<Integrator>> cache;
    auto& slot = cache[levels];
    if (!slot) {
        slot = std::make_unique<Integrator>(static_cast<std::size_t>(levels));
    }
    return *slot;
}

struct Interval {
    double a;
    double b;
};

}  // namespace

QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadConfig& cfg) {
    cfg.validate();
    if (!(b > a)) {
        return {};
    }
    double err = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    const double v = integrator_for(cfg.max_subdivisions)
                         .integrate(f, a, b, cfg.rel_tol, &err, &l1, &levels);
    const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * l1);
    if (!std::isfinite(v) || !(err <= allowed)) {
        throw QuadratureError("integrate_interval: tolerance not reached", v, err);
    }
    return {v, err};
}

QuadResult integrate_peaks(const std::function<double(double)>& f, std::span<const Peak> peaks,
                           const QuadConfig& cfg, double lo, double hi) {
    cfg.validate();
    if (peaks.empty()) {
        throw UsageError("integrate_peaks: at least one peak required");
    }
    const double edge_limit = cfg.abs_tol / 10.0;
    std::vector<Interval> windows;
    for (const Peak& pk : peaks) {
        if (!(pk.scale > 0.0) || !std::isfinite(pk.scale)) {
            throw UsageError("integrate_peaks: peak scale must be positive and finite");
        }
        double r = cfg.truncation_sigmas * pk.scale;
        Interval w{};
        for (int doubling = 0;; ++doubling) {
            w = {std::max(lo, pk.center - r), std::min(hi, pk.center + r)};
            const bool left_ok = w.a == lo || std::fabs(f(w.a)) < edge_limit;
            const bool right_ok = w.b == hi || std::fabs(f(w.b)) < edge_limit;
            if (left_ok && right_ok) {
                break;
            }
            if (doubling >= 60) {
                throw QuadratureError("integrate_peaks: integrand does not decay", 0.0,
                                      std::fabs(f(w.b)) + std::fabs(f(w.a)));
            }
            r *= 2.0;
        }
        windows.push_back(w);
    }
    std::sort(windows.begin(), windows.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    std::vector<Interval> merged;
    for (const Interval& w : windows) {
        if (!merged.empty() && w.a <= merged.back().b) {
            merged.back().b = std::max(merged.back().b, w.b);
        } else {
            merged.push_back(w);
        }
    }
    QuadResult total;
    for (const Interval& w : merged) {
        const QuadResult part = integrate_interval(f, w.a, w.b, cfg);
        total.value += part.value;
        total.error_estimate += part.error_estimate;
    }
    return total;
}

}  // namespace cwlo
