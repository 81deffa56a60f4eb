#include "rocdin/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rocdin {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char* winner_name(Winner w) {
    switch (w) {
    case Winner::a: return "A";
    case Winner::b: return "B";
    case Winner::tie: return "Tie";
    }
    return "?";
}

const char* rationale_name(Rationale r) {
    switch (r) {
    case Rationale::by_auc: return "ByAUC";
    case Rationale::by_dinegentropy: return "ByDinegentropy";
    case Rationale::identical: return "Identical";
    }
    return "?";
}

namespace {

// JSON numbers cannot be inf, so infinite metrics render as the string "inf".
std::string json_value(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    return format_number(v);
}

std::string json_metric(const std::optional<MetricEstimate>& m) {
    if (!m) return "null";
    return json_value(m->value);
}

std::string json_metric_err(const std::optional<MetricEstimate>& m) {
    if (!m) return "null";
    return json_value(m->error);
}

} // namespace

std::string report_to_json(const MetricsReport& r) {
    std::ostringstream out;
    out << "{";
    out << "\"auc\":" << json_value(r.auc.value);
    out << ",\"a_star\":" << json_value(r.a_star);
    out << ",\"gini\":" << json_value(r.gini);
    out << ",\"kl_forward_bits\":" << json_metric(r.kl_forward);
    out << ",\"kl_reverse_bits\":" << json_metric(r.kl_reverse);
    out << ",\"dinegentropy_bits\":" << json_metric(r.dinegentropy);
    out << ",\"errors\":{";
    out << "\"auc\":" << json_value(r.auc.error);
    out << ",\"kl_forward_bits\":" << json_metric_err(r.kl_forward);
    out << ",\"kl_reverse_bits\":" << json_metric_err(r.kl_reverse);
    out << ",\"dinegentropy_bits\":" << json_metric_err(r.dinegentropy);
    out << "}";
    if (r.approximate) out << ",\"approximate\":true";
    out << "}";
    return out.str();
}

std::string verdict_to_json(const ComparisonVerdict& v) {
    std::ostringstream out;
    out << "{";
    out << "\"report_a\":" << report_to_json(v.report_a);
    out << ",\"report_b\":" << report_to_json(v.report_b);
    out << ",\"crossing_count\":" << v.crossings.size();
    out << ",\"crossings\":[";
    for (std::size_t i = 0; i < v.crossings.size(); ++i) {
        if (i) out << ",";
        out << "[" << format_number(v.crossings[i].u_lo) << ","
            << format_number(v.crossings[i].u_hi) << "]";
    }
    out << "]";
    out << ",\"auc_tie\":" << (v.auc_tie ? "true" : "false");
    out << ",\"winner\":\"" << winner_name(v.winner) << "\"";
    out << ",\"rationale\":\"" << rationale_name(v.rationale) << "\"";
    out << "}";
    return out.str();
}

} // namespace rocdin
