#pragma once

#include <optional>
#include <vector>

#include "rocdin/distribution.hpp"
#include "rocdin/quadrature.hpp"
#include "rocdin/roc.hpp"

namespace rocdin {

/// Metric value plus the quadrature error estimate behind it. value may be
/// +infinity (support mismatch); infinite metrics carry error 0.
struct MetricEstimate {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// Scores for one ROC curve. All information quantities are in bits.
/// kl/dinegentropy are absent for empirical curves without densities.
struct MetricsReport {
    MetricEstimate auc;
    double a_star = 0.0; // auc - 1/2
    double gini = 0.0;   // 2*auc - 1
    std::optional<MetricEstimate> kl_forward;   // KL(roc density || uniform)
    std::optional<MetricEstimate> kl_reverse;   // KL(uniform || roc density)
    std::optional<MetricEstimate> dinegentropy; // sum of the two
    bool approximate = false; // KDE-backed densities
};

enum class Winner { a, b, tie };
enum class Rationale { by_auc, by_dinegentropy, identical };

struct ComparisonVerdict {
    MetricsReport report_a;
    MetricsReport report_b;
    std::vector<CrossingBracket> crossings;
    bool auc_tie = false;
    Winner winner = Winner::tie;
    Rationale rationale = Rationale::identical;
};

/// Area under the curve: integral of the curve over u in [0,1] (trapezoid
/// over the vertices for empirical curves). Overshoot beyond [0,1] is clamped
/// only when it is within the error estimate.
MetricEstimate auc(const RocCurve& curve,
                   const QuadratureConfig& cfg = QuadratureConfig{});

/// Gini coefficient 2*auc - 1; throws DomainError outside [0,1].
double gini(double auc_value);

/// Every information quantity in this module is in bits (log base 2); these
/// convert to and from natural-log units.
double bits_to_nats(double bits);
double nats_to_bits(double nats);

/// Kullback-Leibler distance of q from reference p, in bits:
/// integral of p(x) * log2(p(x)/q(x)). Returns +infinity when q vanishes on
/// a set where p has mass (support containment checked up to null sets).
MetricEstimate kl_divergence(const ContinuousDistribution& p,
                             const ContinuousDistribution& q,
                             const QuadratureConfig& cfg = QuadratureConfig{});

/// Jeffreys distance / dinegentropy in bits, computed both as the direct
/// integral of (p-q)*log2(p/q) and as the sum of the two KL distances; the
/// routes are cross-checked and the sum-of-KLs value is returned. Throws
/// DisagreementError when the routes differ beyond 10x the combined error
/// estimates.
MetricEstimate dinegentropy(const ContinuousDistribution& p,
                            const ContinuousDistribution& q,
                            const QuadratureConfig& cfg = QuadratureConfig{});

/// Dinegentropy of the ROC curve itself against the diagonal: for a direct
/// CDF curve this is dinegentropy(g, uniform); for a parametric curve the
/// likelihood-ratio density f1(F0^-1(s))/f0(F0^-1(s)) is scored against the
/// uniform and cross-checked against the threshold-domain integral. Empirical
/// curves are unsupported.
MetricEstimate dinegentropy_of_roc(const RocCurve& curve,
                                   const QuadratureConfig& cfg = QuadratureConfig{});

/// Full per-curve report; empirical curves get AUC/Gini only.
MetricsReport build_report(const RocCurve& curve,
                           const QuadratureConfig& cfg = QuadratureConfig{});

struct Decision {
    Winner winner;
    Rationale rationale;
    bool auc_tie;
};

/// The comparison rule: AUC decides when the curves do not cross and the
/// AUCs differ beyond auc_tie_tol; otherwise the larger dinegentropy wins;
/// a tie requires both metrics to agree within tolerance.
Decision decide(const MetricsReport& a, const MetricsReport& b,
                std::size_t crossing_count, double auc_tie_tol);

ComparisonVerdict compare(const RocCurve& a, const RocCurve& b,
                          const QuadratureConfig& cfg = QuadratureConfig{},
                          double auc_tie_tol = 1e-6, int crossing_grid = 4096);

namespace detail {
/// Threshold-domain KL integral without the quantile-domain substitution;
/// exposed so tests can compare the generic route against the substituted
/// one on families where both are feasible.
MetricEstimate kl_divergence_direct(const ContinuousDistribution& p,
                                    const ContinuousDistribution& q,
                                    const QuadratureConfig& cfg);
} // namespace detail

} // namespace rocdin
