#pragma once

#include <string>

#include "rocdin/metrics.hpp"

namespace rocdin {

/// All numeric output is fixed at 12 significant digits so identical
/// invocations produce byte-identical bytes; infinities render as "inf".
std::string format_number(double v);

const char* winner_name(Winner w);
const char* rationale_name(Rationale r);

/// Flat report object: auc, a_star, gini, kl_forward_bits, kl_reverse_bits,
/// dinegentropy_bits, errors (per-metric error estimates). Metrics without a
/// value (empirical curves) serialize as null.
std::string report_to_json(const MetricsReport& report);

/// Comparison object: report_a, report_b, crossing_count, crossings,
/// auc_tie, winner, rationale.
std::string verdict_to_json(const ComparisonVerdict& verdict);

} // namespace rocdin
