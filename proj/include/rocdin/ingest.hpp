#pragma once

#include <iosfwd>
#include <vector>

#include "rocdin/distribution.hpp"
#include "rocdin/roc.hpp"

namespace rocdin {

enum class ScoreLabel { n, d };

struct ScoreRecord {
    double score;
    ScoreLabel label;
    int line; // source line, for diagnostics
};

struct ScoreDataset {
    std::vector<ScoreRecord> records;
    std::size_t n0 = 0; // class N count
    std::size_t n1 = 0; // class D count

    std::vector<double> class_scores(ScoreLabel which) const;
};

/// Reads `score,label` CSV (header required, labels N/D case-insensitive).
/// Throws MalformedRowError / UnknownLabelError with the 1-based line number,
/// EmptyClassError when either class is missing.
ScoreDataset parse_scores(std::istream& in);

/// Step-curve vertices from a descending threshold sweep over the distinct
/// scores, deduplicated, with (0,0) and (1,1) attached.
RocCurve empirical_roc(const ScoreDataset& ds);

/// Trapezoidal area under empirical_roc. Internally verified against the
/// rank-based pair-counting estimator (ties at half weight); the two must
/// match to 1e-12 or the computation aborts.
double empirical_auc(const ScoreDataset& ds);

/// Gaussian-kernel density with Silverman bandwidth
/// 0.9*min(sd, IQR/1.34)*m^(-1/5) for the requested class. The result is
/// tagged approximate; it supports pdf/cdf/quantile like any other law.
/// Throws TooFewPointsError for classes under 5 points or zero spread.
ContinuousDistribution kde_density(const ScoreDataset& ds, ScoreLabel which);

} // namespace rocdin
