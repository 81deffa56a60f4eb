#include "rocdin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rocdin/errors.hpp"

namespace rocdin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MetricEstimate infinite_metric() { return {kInf, 0.0, true}; }

bool support_contained(const ContinuousDistribution& p,
                       const ContinuousDistribution& q) {
    const Interval sp = p.support(), sq = q.support();
    return sp.lo >= sq.lo - 1e-12 && sp.hi <= sq.hi + 1e-12;
}

// q must not vanish on a set where p has mass; scan p's quantile grid so the
// check looks where the mass actually is. Quantiles that collapse onto the
// support endpoints (steep laws underflow there) are null sets and are left
// to the integrator's endpoint handling.
bool q_vanishes_on_p(const ContinuousDistribution& p,
                     const ContinuousDistribution& q) {
    const Interval sp = p.support();
    for (int k = 1; k < 64; ++k) {
        const double x = p.quantile(k / 64.0);
        if (x <= sp.lo || x >= sp.hi) continue;
        if (q.pdf(x) == 0.0 && p.pdf(x) > 0.0) return true;
    }
    return false;
}

struct TruncatedDomain {
    double lo;
    double hi;
    double tail_err; // bound on the discarded tail contribution, in bits
};

// Intersection of the two supports with infinite ends cut at quantiles so the
// combined discarded tail mass stays below infinite_cutoff_prob. The bound on
// the discarded KL/J contribution is tail mass times the log-ratio magnitude
// at the cut plus slack for its growth across the tail.
TruncatedDomain truncate_domain(const ContinuousDistribution& p,
                                const ContinuousDistribution& q,
                                const QuadratureConfig& cfg,
                                double mass_factor) {
    const Interval sp = p.support(), sq = q.support();
    TruncatedDomain d{std::max(sp.lo, sq.lo), std::min(sp.hi, sq.hi), 0.0};
    const double h = 0.5 * cfg.infinite_cutoff_prob;

    auto log_ratio_mag = [&p, &q](double x) {
        const double l = p.log2_pdf(x) - q.log2_pdf(x);
        return std::isfinite(l) ? std::fabs(l) : 64.0;
    };

    if (std::isinf(d.lo)) {
        double cut = kInf;
        if (std::isinf(sp.lo)) cut = std::min(cut, p.quantile(h));
        if (std::isinf(sq.lo)) cut = std::min(cut, q.quantile(h));
        d.lo = cut;
        d.tail_err += mass_factor * h * (log_ratio_mag(cut) + 16.0);
    }
    if (std::isinf(d.hi)) {
        double cut = -kInf;
        if (std::isinf(sp.hi)) cut = std::max(cut, p.quantile(1.0 - h));
        if (std::isinf(sq.hi)) cut = std::max(cut, q.quantile(1.0 - h));
        d.hi = cut;
        d.tail_err += mass_factor * h * (log_ratio_mag(cut) + 16.0);
    }
    return d;
}

MetricEstimate from_integral(const IntegralResult& r, double extra_err) {
    return {r.value, r.error_estimate + extra_err, r.converged};
}

// KL integral in the quantile domain of the reference p:
//   KL(p||q) = int_0^1 [log2 p - log2 q](Q_p(v)) dv.
// All compositions go through the log2 hooks, so laws whose quantiles
// underflow the double range (PowerRoot with large n) stay finite.
MetricEstimate kl_quantile_route(const ContinuousDistribution& p,
                                 const ContinuousDistribution& q,
                                 const QuadratureConfig& cfg) {
    auto integrand = [&p, &q](double v) {
        const double l2x = p.log2_quantile(v);
        return p.log2_pdf_at_quantile(v) - q.log2_pdf_given_log2x(l2x);
    };
    return from_integral(integrate(integrand, 0.0, 1.0, cfg), 0.0);
}

} // namespace

namespace detail {

MetricEstimate kl_divergence_direct(const ContinuousDistribution& p,
                                    const ContinuousDistribution& q,
                                    const QuadratureConfig& cfg) {
    const TruncatedDomain dom = truncate_domain(p, q, cfg, 1.0);
    auto integrand = [&p, &q](double x) {
        const double px = p.pdf(x);
        if (!(px > 0.0)) return 0.0;
        return px * (p.log2_pdf(x) - q.log2_pdf(x));
    };
    return from_integral(integrate(integrand, dom.lo, dom.hi, cfg), dom.tail_err);
}

} // namespace detail

MetricEstimate kl_divergence(const ContinuousDistribution& p,
                             const ContinuousDistribution& q,
                             const QuadratureConfig& cfg) {
    cfg.validate();
    if (!support_contained(p, q) || q_vanishes_on_p(p, q)) return infinite_metric();
    if (p.prefers_quantile_integration()) return kl_quantile_route(p, q, cfg);
    return detail::kl_divergence_direct(p, q, cfg);
}

namespace {

// Theorem-style single integral int (p - q) log2(p/q), used to cross-check
// the sum of the two KL distances.
MetricEstimate dinegentropy_single_route(const ContinuousDistribution& p,
                                         const ContinuousDistribution& q,
                                         const QuadratureConfig& cfg) {
    const bool p_pref = p.prefers_quantile_integration();
    const bool q_pref = q.prefers_quantile_integration();
    if (p_pref || q_pref) {
        const bool use_p =
            p_pref && (!q_pref || p.quantile_integration_priority() >=
                                      q.quantile_integration_priority());
        const ContinuousDistribution& ref = use_p ? p : q;
        const ContinuousDistribution& other = use_p ? q : p;
        auto integrand = [&ref, &other](double v) {
            const double l2x = ref.log2_quantile(v);
            const double d =
                ref.log2_pdf_at_quantile(v) - other.log2_pdf_given_log2x(l2x);
            return (1.0 - std::exp2(-d)) * d;
        };
        return from_integral(integrate(integrand, 0.0, 1.0, cfg), 0.0);
    }
    const TruncatedDomain dom = truncate_domain(p, q, cfg, 2.0);
    auto integrand = [&p, &q](double t) {
        const double fp = p.pdf(t);
        const double fq = q.pdf(t);
        if (fp == 0.0 && fq == 0.0) return 0.0;
        return (fp - fq) * (p.log2_pdf(t) - q.log2_pdf(t));
    };
    return from_integral(integrate(integrand, dom.lo, dom.hi, cfg), dom.tail_err);
}

void check_route_agreement(double a, double err_a, double b, double err_b,
                           const QuadratureConfig& cfg, const char* what) {
    const double delta = std::fabs(a - b);
    const double allowance = 10.0 * (err_a + err_b + cfg.abs_tol);
    if (delta > allowance)
        throw DisagreementError(std::string(what) +
                                " routes disagree: " + std::to_string(a) + " vs " +
                                std::to_string(b) + " (allowance " +
                                std::to_string(allowance) + ")");
}

} // namespace

MetricEstimate dinegentropy(const ContinuousDistribution& p,
                            const ContinuousDistribution& q,
                            const QuadratureConfig& cfg) {
    const MetricEstimate klf = kl_divergence(p, q, cfg);
    const MetricEstimate klr = kl_divergence(q, p, cfg);
    if (std::isinf(klf.value) || std::isinf(klr.value)) return infinite_metric();

    MetricEstimate sum;
    sum.value = klf.value + klr.value;
    sum.error = klf.error + klr.error;
    sum.converged = klf.converged && klr.converged;

    const MetricEstimate single = dinegentropy_single_route(p, q, cfg);
    check_route_agreement(sum.value, sum.error, single.value, single.error, cfg,
                          "dinegentropy");
    sum.error = std::max(sum.error, std::fabs(sum.value - single.value));
    return sum;
}

MetricEstimate dinegentropy_of_roc(const RocCurve& curve,
                                   const QuadratureConfig& cfg) {
    switch (curve.kind()) {
    case CurveKind::direct_cdf:
        return dinegentropy(curve.direct(), make_uniform01(), cfg);
    case CurveKind::parametric: {
        const ContinuousDistribution& f0 = curve.class_n();
        const ContinuousDistribution& f1 = curve.class_d();
        MetricEstimate j = dinegentropy(f0, f1, cfg);
        if (std::isinf(j.value)) return j;
        // Specificity-domain route: score the likelihood-ratio density
        // f1(F0^-1(s))/f0(F0^-1(s)) against the uniform on [0,1].
        auto integrand = [&f0, &f1](double s) {
            double d;
            if (f0.prefers_quantile_integration()) {
                d = f1.log2_pdf_given_log2x(f0.log2_quantile(s)) -
                    f0.log2_pdf_at_quantile(s);
            } else {
                const double x = f0.quantile(s);
                d = f1.log2_pdf(x) - f0.log2_pdf(x);
            }
            return (std::exp2(d) - 1.0) * d;
        };
        const MetricEstimate s_route =
            from_integral(integrate(integrand, 0.0, 1.0, cfg), 0.0);
        check_route_agreement(j.value, j.error, s_route.value, s_route.error, cfg,
                              "roc dinegentropy");
        j.error = std::max(j.error, std::fabs(j.value - s_route.value));
        return j;
    }
    case CurveKind::empirical:
        throw UnsupportedError(
            "dinegentropy of an empirical curve requires densities; "
            "use the KDE path on the underlying scores");
    }
    throw UnsupportedError("unknown curve kind");
}

MetricEstimate auc(const RocCurve& curve, const QuadratureConfig& cfg) {
    cfg.validate();
    if (curve.kind() == CurveKind::empirical) {
        const std::vector<RocPoint>& pts = curve.points();
        double area = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            area += (pts[i].fpp - pts[i - 1].fpp) * 0.5 *
                    (pts[i].sensitivity + pts[i - 1].sensitivity);
        return {area, 2e-16 * static_cast<double>(pts.size()), true};
    }
    auto f = [&curve](double u) { return curve.value(u); };
    IntegralResult r = integrate(f, 0.0, 1.0, cfg);
    MetricEstimate est = from_integral(r, 0.0);
    const double slack = std::max(est.error, 1e-12);
    if (est.value > 1.0 && est.value - 1.0 <= slack) est.value = 1.0;
    if (est.value < 0.0 && -est.value <= slack) est.value = 0.0;
    return est;
}

double gini(double auc_value) {
    if (!(auc_value >= 0.0 && auc_value <= 1.0))
        throw DomainError("gini requires an AUC in [0,1]");
    return 2.0 * auc_value - 1.0;
}

double bits_to_nats(double bits) { return bits * std::log(2.0); }
double nats_to_bits(double nats) { return nats / std::log(2.0); }

MetricsReport build_report(const RocCurve& curve, const QuadratureConfig& cfg) {
    MetricsReport rep;
    rep.auc = auc(curve, cfg);
    rep.a_star = rep.auc.value - 0.5;
    rep.gini = gini(rep.auc.value);
    switch (curve.kind()) {
    case CurveKind::direct_cdf: {
        const ContinuousDistribution& g = curve.direct();
        const ContinuousDistribution u = make_uniform01();
        rep.kl_forward = kl_divergence(g, u, cfg);
        rep.kl_reverse = kl_divergence(u, g, cfg);
        rep.dinegentropy = dinegentropy_of_roc(curve, cfg);
        rep.approximate = g.approximate();
        break;
    }
    case CurveKind::parametric: {
        const ContinuousDistribution& f0 = curve.class_n();
        const ContinuousDistribution& f1 = curve.class_d();
        rep.kl_forward = kl_divergence(f1, f0, cfg);
        rep.kl_reverse = kl_divergence(f0, f1, cfg);
        rep.dinegentropy = dinegentropy_of_roc(curve, cfg);
        rep.approximate = f0.approximate() || f1.approximate();
        break;
    }
    case CurveKind::empirical:
        break; // no densities: AUC/Gini only
    }
    return rep;
}

Decision decide(const MetricsReport& a, const MetricsReport& b,
                std::size_t crossing_count, double auc_tie_tol) {
    Decision d;
    d.auc_tie = std::fabs(a.auc.value - b.auc.value) <= auc_tie_tol;

    if (crossing_count == 0 && !d.auc_tie) {
        d.winner = a.auc.value > b.auc.value ? Winner::a : Winner::b;
        d.rationale = Rationale::by_auc;
        return d;
    }
    if (!a.dinegentropy || !b.dinegentropy)
        throw UnsupportedError(
            "comparison needs dinegentropy (curves cross or AUCs tie) but a "
            "curve has no density-based metrics");

    const double ja = a.dinegentropy->value;
    const double jb = b.dinegentropy->value;
    const bool both_inf = std::isinf(ja) && std::isinf(jb);
    const bool j_tie =
        both_inf ||
        (std::isfinite(ja) && std::isfinite(jb) &&
         std::fabs(ja - jb) <=
             10.0 * (a.dinegentropy->error + b.dinegentropy->error) + 1e-9);

    if (!j_tie) {
        d.winner = ja > jb ? Winner::a : Winner::b;
        d.rationale = Rationale::by_dinegentropy;
    } else if (!d.auc_tie) {
        d.winner = a.auc.value > b.auc.value ? Winner::a : Winner::b;
        d.rationale = Rationale::by_auc;
    } else {
        d.winner = Winner::tie;
        d.rationale = Rationale::identical;
    }
    return d;
}

ComparisonVerdict compare(const RocCurve& a, const RocCurve& b,
                          const QuadratureConfig& cfg, double auc_tie_tol,
                          int crossing_grid) {
    ComparisonVerdict v;
    v.report_a = build_report(a, cfg);
    v.report_b = build_report(b, cfg);
    v.crossings = find_crossings(a, b, crossing_grid);
    const Decision d = decide(v.report_a, v.report_b, v.crossings.size(), auc_tie_tol);
    v.auc_tie = d.auc_tie;
    v.winner = d.winner;
    v.rationale = d.rationale;
    return v;
}

} // namespace rocdin
