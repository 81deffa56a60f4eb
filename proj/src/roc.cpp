#include "rocdin/roc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "rocdin/errors.hpp"

namespace rocdin {

RocCurve RocCurve::parametric(ContinuousDistribution class_n,
                              ContinuousDistribution class_d) {
    RocCurve c;
    c.kind_ = CurveKind::parametric;
    c.f0_ = std::move(class_n);
    c.f1_ = std::move(class_d);
    return c;
}

RocCurve RocCurve::direct_cdf(ContinuousDistribution g) {
    const Interval s = g.support();
    if (s.lo != 0.0 || s.hi != 1.0)
        throw DomainError("direct-CDF ROC curve requires a distribution supported on [0,1]");
    RocCurve c;
    c.kind_ = CurveKind::direct_cdf;
    c.g_ = std::move(g);
    return c;
}

RocCurve RocCurve::empirical(std::vector<RocPoint> points) {
    if (points.size() < 2)
        throw DomainError("empirical ROC curve needs at least two vertices");
    if (points.front().fpp != 0.0 || points.front().sensitivity != 0.0)
        throw DomainError("empirical ROC curve must start at (0,0)");
    if (points.back().fpp != 1.0 || points.back().sensitivity != 1.0)
        throw DomainError("empirical ROC curve must end at (1,1)");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].fpp < points[i - 1].fpp ||
            points[i].sensitivity < points[i - 1].sensitivity)
            throw DomainError("empirical ROC vertices must be non-decreasing");
    }
    RocCurve c;
    c.kind_ = CurveKind::empirical;
    c.points_ = std::move(points);
    return c;
}

const ContinuousDistribution& RocCurve::class_n() const {
    if (kind_ != CurveKind::parametric)
        throw UsageError("class_n() requires a parametric curve");
    return *f0_;
}

const ContinuousDistribution& RocCurve::class_d() const {
    if (kind_ != CurveKind::parametric)
        throw UsageError("class_d() requires a parametric curve");
    return *f1_;
}

const ContinuousDistribution& RocCurve::direct() const {
    if (kind_ != CurveKind::direct_cdf)
        throw UsageError("direct() requires a direct-CDF curve");
    return *g_;
}

const std::vector<RocPoint>& RocCurve::points() const {
    if (kind_ != CurveKind::empirical)
        throw UsageError("points() requires an empirical curve");
    return points_;
}

double RocCurve::value(double u) const {
    if (!(u >= 0.0 && u <= 1.0))
        throw DomainError("roc value requires u in [0,1]");
    switch (kind_) {
    case CurveKind::parametric: {
        if (u == 1.0) return 1.0; // exact endpoint: every threshold exhausted
        const double t = f0_->quantile(1.0 - u);
        return 1.0 - f1_->cdf(t);
    }
    case CurveKind::direct_cdf:
        return g_->cdf(u);
    case CurveKind::empirical: {
        // Last vertex with fpp <= u; vertical runs resolve to the top point.
        auto it = std::upper_bound(
            points_.begin(), points_.end(), u,
            [](double lhs, const RocPoint& p) { return lhs < p.fpp; });
        if (it == points_.end()) return points_.back().sensitivity;
        const RocPoint& next = *it;
        const RocPoint& prev = *(it - 1);
        if (prev.fpp == u) return prev.sensitivity;
        const double w = (u - prev.fpp) / (next.fpp - prev.fpp);
        return prev.sensitivity + w * (next.sensitivity - prev.sensitivity);
    }
    }
    return 0.0; // unreachable
}

double RocCurve::reflected(double s) const {
    if (kind_ != CurveKind::parametric)
        throw UsageError("reflected() requires a parametric curve");
    if (!(s >= 0.0 && s <= 1.0))
        throw DomainError("reflected roc value requires s in [0,1]");
    return f1_->cdf(f0_->quantile(s));
}

ThresholdPoint RocCurve::threshold_point(double t) const {
    if (kind_ != CurveKind::parametric)
        throw UsageError("threshold_point() requires a parametric curve");
    if (!std::isfinite(t)) throw DomainError("threshold must be finite");
    ThresholdPoint p;
    p.threshold = t;
    p.specificity = f0_->cdf(t);
    p.sensitivity = 1.0 - f1_->cdf(t);
    p.fpp = 1.0 - p.specificity;
    return p;
}

double RocCurve::likelihood_ratio(double t) const {
    if (kind_ != CurveKind::parametric)
        throw UsageError("likelihood_ratio() requires a parametric curve");
    const double d0 = f0_->pdf(t);
    const double d1 = f1_->pdf(t);
    if (d0 == 0.0) {
        if (d1 == 0.0) return 1.0; // both classes silent at t
        throw ZeroDenominatorError(
            "likelihood ratio is infinite at t=" + std::to_string(t) +
            " (f0 vanishes while f1 does not)");
    }
    return d1 / d0;
}

namespace {

// Union of the two class quantile grids; resolves thresholds where the
// probability mass actually lives, which also covers half-infinite supports.
std::vector<double> quantile_grid(const ContinuousDistribution& f0,
                                  const ContinuousDistribution& f1,
                                  int grid_size) {
    std::set<double> pts;
    for (int k = 1; k < grid_size; ++k) {
        const double p = static_cast<double>(k) / grid_size;
        const double q0 = f0.quantile(p);
        const double q1 = f1.quantile(p);
        if (std::isfinite(q0)) pts.insert(q0);
        if (std::isfinite(q1)) pts.insert(q1);
    }
    return {pts.begin(), pts.end()};
}

} // namespace

DominanceReport check_dominance(const RocCurve& curve, int grid_size) {
    if (curve.kind() != CurveKind::parametric)
        throw UsageError("check_dominance() requires a parametric curve");
    if (grid_size < 2) throw DomainError("dominance grid size must be >= 2");
    const ContinuousDistribution& f0 = curve.class_n();
    const ContinuousDistribution& f1 = curve.class_d();

    DominanceReport report;
    for (double t : quantile_grid(f0, f1, grid_size)) {
        const double surv1 = 1.0 - f1.cdf(t);
        const double surv0 = 1.0 - f0.cdf(t);
        if (surv1 < surv0 - 1e-12) {
            report.holds = false;
            report.violations.push_back(t);
        }
    }
    return report;
}

std::vector<CrossingBracket> find_crossings(const RocCurve& a, const RocCurve& b,
                                            int grid_size) {
    if (grid_size < 16) throw DomainError("crossing grid size must be >= 16");

    auto diff = [&a, &b](double u) { return a.value(u) - b.value(u); };

    std::vector<CrossingBracket> out;
    double last_u = 0.0;
    int last_sign = 0;
    for (int k = 1; k < grid_size; ++k) {
        const double u = static_cast<double>(k) / grid_size;
        const double d = diff(u);
        const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (sign == 0) continue; // touching point; only sign changes count
        if (last_sign != 0 && sign != last_sign) {
            double lo = last_u, hi = u;
            double flo = diff(lo);
            while (hi - lo > 1e-9) {
                const double mid = lo + 0.5 * (hi - lo);
                const double fm = diff(mid);
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push_back({lo, hi});
        }
        last_sign = sign;
        last_u = u;
    }
    return out;
}

} // namespace rocdin
