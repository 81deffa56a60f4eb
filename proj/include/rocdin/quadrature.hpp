#pragma once

#include <cstdint>
#include <functional>

namespace rocdin {

/// Tolerances and limits for adaptive integration.
struct QuadratureConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_depth = 60;               // subdivision levels per panel chain
    double endpoint_shrink = 1e-14;   // open-interval offset for singular endpoints
    double infinite_cutoff_prob = 1e-12; // tail mass cut for half-infinite domains

    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = false;
};

/// Adaptive integration of f over (lo, hi) with a Gauss(7)/Kronrod(15) pair
/// per panel. hi and/or lo may be infinite (mapped to a finite interval by a
/// rational transform). Integrable endpoint singularities are approached by
/// geometrically shrinking panels down to lo + endpoint_shrink*(hi-lo); when
/// the innermost sliver still dominates the error budget its contribution is
/// replaced by a geometric-series extrapolation of the panel ladder.
///
/// Throws NonFiniteIntegrandError if f returns a non-finite value strictly
/// inside the working interval; never converges silently: converged is false
/// whenever error_estimate exceeds max(abs_tol, rel_tol*|value|).
IntegralResult integrate(const std::function<double(double)>& f,
                         double lo, double hi,
                         const QuadratureConfig& cfg = QuadratureConfig{});

} // namespace rocdin
