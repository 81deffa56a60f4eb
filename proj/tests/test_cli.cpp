#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rocdin/cli.hpp"
#include "rocdin/metrics.hpp"
#include "rocdin/report_json.hpp"

using nlohmann::json;
using namespace rocdin;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
    const std::filesystem::path p = std::filesystem::temp_directory_path() / name;
    std::ofstream f(p);
    f << body;
    return p;
}

} // namespace

TEST_CASE("analyze a direct-cdf curve emits the flat report") {
    const RunResult r = run_cli({"analyze", "--roc", "direct:beta:1,3"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(std::fabs(j["auc"].get<double>() - 0.75) <= 1e-8);
    CHECK(std::fabs(j["gini"].get<double>() - 0.5) <= 2e-8);
    CHECK(std::fabs(j["kl_forward_bits"].get<double>() - 0.623166) <= 1e-4);
    CHECK(std::fabs(j["kl_reverse_bits"].get<double>() - 1.30043) <= 1e-4);
    CHECK(std::fabs(j["dinegentropy_bits"].get<double>() - 1.923596) <= 1e-4);
    CHECK(j["errors"].contains("auc"));
    CHECK_FALSE(j.contains("dominance")); // not a parametric analysis
}

TEST_CASE("analyze a random test") {
    const RunResult r = run_cli({"analyze", "--f0", "uniform", "--f1", "uniform"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(std::fabs(j["auc"].get<double>() - 0.5) <= 1e-9);
    CHECK(std::fabs(j["gini"].get<double>()) <= 2e-9);
    CHECK(std::fabs(j["dinegentropy_bits"].get<double>()) <= 1e-9);
    CHECK(j["dominance"]["holds"].get<bool>());
    CHECK(j["thresholds"].is_array());
    CHECK(j["thresholds"].size() > 0);
}

TEST_CASE("json round-trips at 12 significant digits") {
    const MetricsReport rep = build_report(RocCurve::direct_cdf(make_beta(2, 6)));
    const std::string serialized = report_to_json(rep);
    const json j = json::parse(serialized);
    CHECK(format_number(j["auc"].get<double>()) == format_number(rep.auc.value));
    CHECK(format_number(j["kl_forward_bits"].get<double>()) ==
          format_number(rep.kl_forward->value));
    CHECK(format_number(j["dinegentropy_bits"].get<double>()) ==
          format_number(rep.dinegentropy->value));
    CHECK(std::fabs(j["auc"].get<double>() - rep.auc.value) <=
          1e-11 * std::max(1.0, std::fabs(rep.auc.value)));
}

TEST_CASE("byte-identical output across invocations") {
    const std::vector<std::string> args = {"compare", "direct:beta:2,6",
                                           "direct:beta:1,3"};
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
}

TEST_CASE("compare the worked-example pair") {
    const RunResult r = run_cli({"compare", "direct:beta:2,6", "direct:beta:1,3"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["winner"].get<std::string>() == "A");
    CHECK(j["rationale"].get<std::string>() == "ByDinegentropy");
    CHECK(j["auc_tie"].get<bool>());
    CHECK(j["crossing_count"].get<int>() == 1);
    CHECK(j["crossings"].size() == 1);
    CHECK(std::fabs(j["report_a"]["dinegentropy_bits"].get<double>() - 4.12548) <=
          1e-3);
}

TEST_CASE("roc-emit produces the closed-form rows") {
    const RunResult r = run_cli({"roc-emit", "direct:beta:1,3", "--points", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "u,sensitivity\n0,0\n0.5,0.875\n1,1\n");
}

TEST_CASE("scores files flow through analyze and compare") {
    const auto path = write_temp(
        "rocdin_scores_ok.csv",
        "score,label\n0.1,N\n0.2,N\n0.35,N\n0.5,N\n0.55,N\n0.3,D\n0.6,D\n0.7,D\n0"
        ".8,D\n0.9,D\n");
    const RunResult r = run_cli({"analyze", "--scores", path.string()});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    // 1 discordant pair (0.3 < each of 0.35, 0.5, 0.55): auc = 22/25... oracle
    // by brute force: D beats N in 22 of 25 pairs, no ties
    CHECK(std::fabs(j["auc"].get<double>() - 22.0 / 25.0) <= 1e-12);
    CHECK(j["approximate"].get<bool>());
    CHECK(j["dinegentropy_bits"].get<double>() > 0.0);

    const RunResult cmp =
        run_cli({"compare", "scores:" + path.string(), "direct:beta:1,3"});
    CHECK(cmp.code == 0);

    // small classes: KDE unavailable, but AUC still reported
    const auto small = write_temp("rocdin_scores_small.csv",
                                  "score,label\n1,N\n2,N\n3,D\n4,D\n");
    const RunResult s = run_cli({"analyze", "--scores", small.string()});
    REQUIRE(s.code == 0);
    const json js = json::parse(s.out);
    CHECK(js["auc"].get<double>() == 1.0);
    CHECK(js["dinegentropy_bits"].is_null());
}

TEST_CASE("malformed scores exit with code 2 and a line diagnostic") {
    const auto path =
        write_temp("rocdin_scores_bad.csv", "score,label\n1.2,N\nx,D\n");
    const RunResult r = run_cli({"analyze", "--scores", path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli({"analyze"}).code == 2);                       // no input
    CHECK(run_cli({"analyze", "--roc", "direct:beta:1,3", "--f0", "uniform",
                   "--f1", "uniform"}).code == 2);               // two inputs
    CHECK(run_cli({"analyze", "--f0", "uniform"}).code == 2);    // half a pair
    CHECK(run_cli({"compare", "direct:beta:1,3"}).code == 2);    // one spec
    CHECK(run_cli({"analyze", "--roc", "beta:1,3"}).code == 2);  // bare dist spec
    CHECK(run_cli({"analyze", "--roc", "direct:beta:0,3"}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"roc-emit", "direct:beta:1,3", "--points", "1"}).code == 2);
    CHECK(run_cli({"analyze", "--roc", "direct:beta:1,3", "--format", "yaml"})
              .code == 2);
}

TEST_CASE("csv and table formats render") {
    const RunResult csv =
        run_cli({"analyze", "--roc", "direct:beta:1,3", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.find("metric,value,error\n") == 0);
    CHECK(csv.out.find("auc,0.75") != std::string::npos);

    const RunResult tab =
        run_cli({"analyze", "--f0", "exp:1", "--f1", "exp:0.5", "--format", "table"});
    REQUIRE(tab.code == 0);
    CHECK(tab.out.find("dominance holds") != std::string::npos);

    const RunResult vcsv = run_cli(
        {"compare", "direct:beta:2,6", "direct:beta:1,3", "--format", "csv"});
    REQUIRE(vcsv.code == 0);
    CHECK(vcsv.out.find("metric,a,b\n") == 0);
    CHECK(vcsv.out.find("winner,A,") != std::string::npos);
    CHECK(vcsv.out.find("crossing_count,1,") != std::string::npos);
}

TEST_CASE("paper reproduction passes end to end") {
    const RunResult r = run_cli({"paper-repro"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    // ten target rows, each explicitly marked PASS
    std::size_t count = 0, pos = 0;
    while ((pos = r.out.find("PASS", pos)) != std::string::npos) {
        ++count;
        pos += 4;
    }
    CHECK(count == 10);
    // quadrature overrides are accepted
    const RunResult loose = run_cli({"paper-repro", "--rel-tol", "1e-10"});
    CHECK(loose.code == 0);
}
