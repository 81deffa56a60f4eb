#pragma once

#include <optional>
#include <vector>

#include "rocdin/distribution.hpp"

namespace rocdin {

enum class CurveKind { parametric, direct_cdf, empirical };

/// Sensitivity/specificity pair at a fixed threshold t.
struct ThresholdPoint {
    double threshold;
    double sensitivity; // 1 - F1(t)
    double specificity; // F0(t)
    double fpp;         // 1 - specificity
};

struct RocPoint {
    double fpp;
    double sensitivity;
};

/// An ROC curve in one of the three forms the analysis needs: induced by a
/// pair of class score distributions, a distribution function on [0,1] read
/// directly as a curve, or an empirical step curve from labeled scores.
class RocCurve {
public:
    static RocCurve parametric(ContinuousDistribution class_n,
                               ContinuousDistribution class_d);
    /// g must be supported exactly on [0,1].
    static RocCurve direct_cdf(ContinuousDistribution g);
    /// points must start at (0,0), end at (1,1), and be non-decreasing in
    /// both coordinates.
    static RocCurve empirical(std::vector<RocPoint> points);

    CurveKind kind() const { return kind_; }

    const ContinuousDistribution& class_n() const; // parametric only
    const ContinuousDistribution& class_d() const; // parametric only
    const ContinuousDistribution& direct() const;  // direct_cdf only
    const std::vector<RocPoint>& points() const;   // empirical only

    /// Sensitivity at false-positive probability u:
    /// parametric -> 1 - F1(F0^-1(1-u)), direct -> g.cdf(u),
    /// empirical -> linear interpolation between vertices.
    double value(double u) const;

    /// Reflected curve F1(F0^-1(s)) at specificity s; parametric only.
    double reflected(double s) const;

    /// (t, S_e, S_p, FPP) at threshold t; parametric only.
    ThresholdPoint threshold_point(double t) const;

    /// f1(t)/f0(t); parametric only. Throws ZeroDenominatorError when
    /// f0(t) = 0 with f1(t) > 0; returns 1 when both densities vanish.
    double likelihood_ratio(double t) const;

private:
    RocCurve() = default;

    CurveKind kind_ = CurveKind::parametric;
    std::optional<ContinuousDistribution> f0_, f1_, g_;
    std::vector<RocPoint> points_;
};

struct DominanceReport {
    bool holds = true;
    std::vector<double> violations; // thresholds where F1bar(t) < F0bar(t)
};

/// Checks the stochastic-dominance condition F1bar(t) >= F0bar(t) - 1e-12 on
/// a quantile-spaced grid (union of the two class quantiles at permilles
/// 1..grid_size-1 of grid_size) over the union support.
DominanceReport check_dominance(const RocCurve& curve, int grid_size = 1000);

struct CrossingBracket {
    double u_lo;
    double u_hi;
};

/// Sign changes of a(u)-b(u) on a uniform grid over (0,1), each refined by
/// bisection to a bracket of width <= 1e-9. Touching without a sign change
/// is not reported.
std::vector<CrossingBracket> find_crossings(const RocCurve& a, const RocCurve& b,
                                            int grid_size = 4096);

} // namespace rocdin
