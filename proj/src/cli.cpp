#include "rocdin/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "rocdin/errors.hpp"
#include "rocdin/ingest.hpp"
#include "rocdin/metrics.hpp"
#include "rocdin/report_json.hpp"

namespace rocdin::cli {

namespace {

struct CommonOptions {
    QuadratureConfig quad;
    std::string format = "json";
    int grid = 4096;
    int points = 11;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_grid, bool with_points) {
    cmd->add_option("--rel-tol", opts.quad.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--abs-tol", opts.quad.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--max-depth", opts.quad.max_depth, "quadrature subdivision depth");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    if (with_grid)
        cmd->add_option("--grid", opts.grid, "crossing-detection grid density");
    if (with_points)
        cmd->add_option("--points", opts.points, "grid points to emit");
}

/// A curve plus whatever density pair backs its information metrics:
/// parametric curves carry their class densities, scores-based curves carry
/// KDE densities when the classes are large enough.
struct CurveBundle {
    RocCurve curve;
    std::optional<ContinuousDistribution> f0, f1;
    bool approximate = false;
    std::string label;
};

CurveBundle bundle_from_scores_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open scores file '" + path + "'");
    const ScoreDataset ds = parse_scores(in);
    CurveBundle b{empirical_roc(ds), std::nullopt, std::nullopt, true,
                  "scores:" + path};
    try {
        b.f0 = kde_density(ds, ScoreLabel::n);
        b.f1 = kde_density(ds, ScoreLabel::d);
    } catch (const TooFewPointsError&) {
        b.f0.reset();
        b.f1.reset(); // AUC/Gini still available
    }
    return b;
}

CurveBundle bundle_from_spec(const std::string& spec) {
    if (spec.rfind("direct:", 0) == 0) {
        ContinuousDistribution g = parse_distribution_spec(spec.substr(7));
        return {RocCurve::direct_cdf(g), std::nullopt, std::nullopt, false, spec};
    }
    if (spec.rfind("scores:", 0) == 0) return bundle_from_scores_file(spec.substr(7));
    throw DomainError("curve spec must start with 'direct:' or 'scores:', got '" +
                      spec + "'");
}

MetricsReport bundle_report(const CurveBundle& b, const QuadratureConfig& cfg) {
    if (b.curve.kind() != CurveKind::empirical) return build_report(b.curve, cfg);
    MetricsReport rep = build_report(b.curve, cfg); // AUC/Gini from the step curve
    if (b.f0 && b.f1) {
        rep.kl_forward = kl_divergence(*b.f1, *b.f0, cfg);
        rep.kl_reverse = kl_divergence(*b.f0, *b.f1, cfg);
        rep.dinegentropy = dinegentropy(*b.f0, *b.f1, cfg);
        rep.approximate = true;
    }
    return rep;
}

bool use_color(std::ostream& out) {
    if (std::getenv("ROCDIN_NO_COLOR") != nullptr) return false;
    return &out == &std::cout && isatty(fileno(stdout));
}

// --------------------------------------------------------------------------
// Rendering

void render_report_csv(const MetricsReport& r, std::ostream& out) {
    auto row = [&out](const char* name, const std::string& value,
                      const std::string& error) {
        out << name << "," << value << "," << error << "\n";
    };
    out << "metric,value,error\n";
    row("auc", format_number(r.auc.value), format_number(r.auc.error));
    row("a_star", format_number(r.a_star), "");
    row("gini", format_number(r.gini), "");
    auto opt = [&row](const char* name, const std::optional<MetricEstimate>& m) {
        if (m)
            row(name, format_number(m->value), format_number(m->error));
        else
            row(name, "", "");
    };
    opt("kl_forward_bits", r.kl_forward);
    opt("kl_reverse_bits", r.kl_reverse);
    opt("dinegentropy_bits", r.dinegentropy);
}

void render_report_table(const MetricsReport& r, std::ostream& out, bool color) {
    const char* bold = color ? "\033[1m" : "";
    const char* reset = color ? "\033[0m" : "";
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s%-20s %-18s %-12s%s\n", bold, "metric", "value",
                  "error", reset);
    out << buf;
    auto row = [&out](const char* name, const std::string& v, const std::string& e) {
        char line[128];
        std::snprintf(line, sizeof line, "%-20s %-18s %-12s\n", name, v.c_str(),
                      e.c_str());
        out << line;
    };
    row("auc", format_number(r.auc.value), format_number(r.auc.error));
    row("a_star", format_number(r.a_star), "-");
    row("gini", format_number(r.gini), "-");
    auto opt = [&row](const char* name, const std::optional<MetricEstimate>& m) {
        if (m)
            row(name, format_number(m->value), format_number(m->error));
        else
            row(name, "n/a", "-");
    };
    opt("kl_forward_bits", r.kl_forward);
    opt("kl_reverse_bits", r.kl_reverse);
    opt("dinegentropy_bits", r.dinegentropy);
}

std::string thresholds_json(const RocCurve& curve, int points) {
    const ContinuousDistribution& f0 = curve.class_n();
    const ContinuousDistribution& f1 = curve.class_d();
    std::vector<double> ts;
    for (int k = 1; k <= points; ++k) {
        const double p = static_cast<double>(k) / (points + 1);
        for (double t : {f0.quantile(p), f1.quantile(p)})
            if (std::isfinite(t)) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const ThresholdPoint tp = curve.threshold_point(ts[i]);
        if (i) out << ",";
        out << "{\"t\":" << format_number(tp.threshold)
            << ",\"sensitivity\":" << format_number(tp.sensitivity)
            << ",\"specificity\":" << format_number(tp.specificity)
            << ",\"fpp\":" << format_number(tp.fpp) << "}";
    }
    out << "]";
    return out.str();
}

std::string dominance_json(const DominanceReport& dom) {
    std::ostringstream out;
    out << "{\"holds\":" << (dom.holds ? "true" : "false") << ",\"violations\":[";
    for (std::size_t i = 0; i < dom.violations.size(); ++i) {
        if (i) out << ",";
        out << format_number(dom.violations[i]);
    }
    out << "]}";
    return out.str();
}

// --------------------------------------------------------------------------
// Subcommand bodies

int run_analyze(const CommonOptions& opts, const std::string& roc_spec,
                const std::string& f0_spec, const std::string& f1_spec,
                const std::string& scores_path, std::ostream& out,
                std::ostream& err) {
    const int sources = (!roc_spec.empty() ? 1 : 0) +
                        (!f0_spec.empty() || !f1_spec.empty() ? 1 : 0) +
                        (!scores_path.empty() ? 1 : 0);
    if (sources != 1 || (!f0_spec.empty()) != (!f1_spec.empty())) {
        err << "analyze needs exactly one of: --roc SPEC, --f0 SPEC --f1 SPEC, "
               "--scores FILE\n";
        return 2;
    }

    std::optional<CurveBundle> bundle;
    if (!roc_spec.empty())
        bundle = bundle_from_spec(roc_spec);
    else if (!scores_path.empty())
        bundle = bundle_from_scores_file(scores_path);
    else {
        ContinuousDistribution f0 = parse_distribution_spec(f0_spec);
        ContinuousDistribution f1 = parse_distribution_spec(f1_spec);
        bundle = CurveBundle{RocCurve::parametric(f0, f1), f0, f1, false,
                             "param:" + f0_spec + ";" + f1_spec};
    }

    const MetricsReport rep = bundle_report(*bundle, opts.quad);

    if (opts.format == "csv") {
        render_report_csv(rep, out);
        return 0;
    }
    if (opts.format == "table") {
        render_report_table(rep, out, use_color(out));
        if (bundle->curve.kind() == CurveKind::parametric) {
            const DominanceReport dom = check_dominance(bundle->curve);
            out << "dominance " << (dom.holds ? "holds" : "violated") << " ("
                << dom.violations.size() << " violating thresholds)\n";
        }
        return 0;
    }
    std::string json = report_to_json(rep);
    if (bundle->curve.kind() == CurveKind::parametric) {
        json.pop_back(); // reopen the object for the parametric extras
        json += ",\"dominance\":" + dominance_json(check_dominance(bundle->curve));
        json += ",\"thresholds\":" + thresholds_json(bundle->curve, opts.points);
        json += "}";
    }
    out << json << "\n";
    return 0;
}

int run_compare(const CommonOptions& opts, const std::string& spec_a,
                const std::string& spec_b, std::ostream& out) {
    const CurveBundle a = bundle_from_spec(spec_a);
    const CurveBundle b = bundle_from_spec(spec_b);

    ComparisonVerdict v;
    v.report_a = bundle_report(a, opts.quad);
    v.report_b = bundle_report(b, opts.quad);
    v.crossings = find_crossings(a.curve, b.curve, opts.grid);
    const Decision d = decide(v.report_a, v.report_b, v.crossings.size(), 1e-6);
    v.auc_tie = d.auc_tie;
    v.winner = d.winner;
    v.rationale = d.rationale;

    if (opts.format == "csv") {
        auto cell = [](const std::optional<MetricEstimate>& m) {
            return m ? format_number(m->value) : std::string();
        };
        out << "metric,a,b\n";
        out << "auc," << format_number(v.report_a.auc.value) << ","
            << format_number(v.report_b.auc.value) << "\n";
        out << "gini," << format_number(v.report_a.gini) << ","
            << format_number(v.report_b.gini) << "\n";
        out << "kl_forward_bits," << cell(v.report_a.kl_forward) << ","
            << cell(v.report_b.kl_forward) << "\n";
        out << "kl_reverse_bits," << cell(v.report_a.kl_reverse) << ","
            << cell(v.report_b.kl_reverse) << "\n";
        out << "dinegentropy_bits," << cell(v.report_a.dinegentropy) << ","
            << cell(v.report_b.dinegentropy) << "\n";
        out << "crossing_count," << v.crossings.size() << ",\n";
        out << "auc_tie," << (v.auc_tie ? "true" : "false") << ",\n";
        out << "winner," << winner_name(v.winner) << ",\n";
        out << "rationale," << rationale_name(v.rationale) << ",\n";
        return 0;
    }
    if (opts.format == "table") {
        out << "winner " << winner_name(v.winner) << " (" << rationale_name(v.rationale)
            << "), crossings " << v.crossings.size() << "\n";
        out << "A: " << spec_a << " auc " << format_number(v.report_a.auc.value);
        if (v.report_a.dinegentropy)
            out << " dinegentropy " << format_number(v.report_a.dinegentropy->value);
        out << "\n";
        out << "B: " << spec_b << " auc " << format_number(v.report_b.auc.value);
        if (v.report_b.dinegentropy)
            out << " dinegentropy " << format_number(v.report_b.dinegentropy->value);
        out << "\n";
        return 0;
    }
    out << verdict_to_json(v) << "\n";
    return 0;
}

int run_roc_emit(const CommonOptions& opts, const std::string& spec,
                 std::ostream& out, std::ostream& err) {
    if (opts.points < 2) {
        err << "roc-emit needs --points >= 2\n";
        return 2;
    }
    const CurveBundle b = bundle_from_spec(spec);
    out << "u,sensitivity\n";
    for (int i = 0; i < opts.points; ++i) {
        const double u = static_cast<double>(i) / (opts.points - 1);
        out << format_number(u) << "," << format_number(b.curve.value(u)) << "\n";
    }
    return 0;
}

struct ReproRow {
    const char* name;
    double computed;
    double target;
    double tol;
    bool relative;
};

int run_paper_repro(const CommonOptions& opts, std::ostream& out) {
    const QuadratureConfig& cfg = opts.quad;
    const ContinuousDistribution u = make_uniform01();
    const ContinuousDistribution beta13 = make_beta(1, 3);
    const ContinuousDistribution beta26 = make_beta(2, 6);

    std::vector<ReproRow> rows;
    rows.push_back({"KL(beta(1,3)||uniform) bits",
                    kl_divergence(beta13, u, cfg).value, 0.623166, 1e-4, true});
    rows.push_back({"KL(uniform||beta(1,3)) bits",
                    kl_divergence(u, beta13, cfg).value, 1.30043, 1e-4, true});
    rows.push_back({"J(beta(1,3),uniform) bits", dinegentropy(beta13, u, cfg).value,
                    1.923596, 1e-4, true});
    rows.push_back({"J(beta(2,6),uniform) bits", dinegentropy(beta26, u, cfg).value,
                    4.12548, 1e-4, true});
    const double targets[4] = {0.0, 11.685, 141.398, 1439.814};
    const double ns[4] = {1.0, 10.0, 100.0, 1000.0};
    const char* names[4] = {"J(power(1),uniform) bits", "J(power(10),uniform) bits",
                            "J(power(100),uniform) bits",
                            "J(power(1000),uniform) bits"};
    for (int i = 0; i < 4; ++i) {
        const double j = dinegentropy(make_power_root(ns[i]), u, cfg).value;
        if (i == 0)
            rows.push_back({names[i], j, targets[i], 1e-9, false});
        else
            rows.push_back({names[i], j, targets[i], 5e-4, true});
    }
    rows.push_back({"AUC(direct beta(1,3))",
                    auc(RocCurve::direct_cdf(beta13), cfg).value, 0.75, 1e-8, false});
    rows.push_back({"AUC(direct beta(2,6))",
                    auc(RocCurve::direct_cdf(beta26), cfg).value, 0.75, 1e-8, false});

    char line[160];
    std::snprintf(line, sizeof line, "%-30s %-18s %-12s %-12s %-12s %s\n", "quantity",
                  "computed", "target", "abs_delta", "rel_delta", "status");
    out << line;
    bool all_pass = true;
    for (const ReproRow& r : rows) {
        const double abs_delta = std::fabs(r.computed - r.target);
        const double rel_delta =
            r.target != 0.0 ? abs_delta / std::fabs(r.target) : abs_delta;
        const bool pass = (r.relative ? rel_delta : abs_delta) <= r.tol;
        all_pass = all_pass && pass;
        std::snprintf(line, sizeof line, "%-30s %-18s %-12s %-12s %-12s %s\n", r.name,
                      format_number(r.computed).c_str(),
                      format_number(r.target).c_str(),
                      format_number(abs_delta).c_str(),
                      format_number(rel_delta).c_str(), pass ? "PASS" : "FAIL");
        out << line;
    }
    out << (all_pass ? "all targets reproduced\n" : "some targets missed\n");
    return all_pass ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ROC curve metrics: AUC, Gini, Kullback-Leibler distances and "
                 "dinegentropy for diagnostic test comparison"};
    app.name("rocdin");
    app.require_subcommand(1);

    CommonOptions opts;

    std::string roc_spec, f0_spec, f1_spec, scores_path;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "score one curve (distribution pair, direct CDF, or score file)");
    analyze->add_option("--roc", roc_spec, "curve spec (direct:<dist> or scores:<path>)");
    analyze->add_option("--f0", f0_spec, "class-N score distribution spec");
    analyze->add_option("--f1", f1_spec, "class-D score distribution spec");
    analyze->add_option("--scores", scores_path, "score,label CSV file");
    add_common(analyze, opts, false, true);

    std::string spec_a, spec_b;
    CLI::App* cmp = app.add_subcommand("compare", "rank two curves");
    cmp->add_option("spec_a", spec_a, "first curve spec")->required();
    cmp->add_option("spec_b", spec_b, "second curve spec")->required();
    add_common(cmp, opts, true, false);

    std::string emit_spec;
    CLI::App* emit = app.add_subcommand("roc-emit", "emit curve points as CSV");
    emit->add_option("spec", emit_spec, "curve spec")->required();
    add_common(emit, opts, false, true);

    CLI::App* repro = app.add_subcommand("paper-repro",
                                         "reproduce the published worked example");
    add_common(repro, opts, false, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (analyze->parsed())
            return run_analyze(opts, roc_spec, f0_spec, f1_spec, scores_path, out, err);
        if (cmp->parsed()) return run_compare(opts, spec_a, spec_b, out);
        if (emit->parsed()) return run_roc_emit(opts, emit_spec, out, err);
        if (repro->parsed()) return run_paper_repro(opts, out);
    } catch (const ParseError& e) {
        err << "line " << e.line << ": " << e.what() << "\n";
        return 2;
    } catch (const EmptyClassError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace rocdin::cli
