#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "rocdin/errors.hpp"
#include "rocdin/ingest.hpp"
#include "rocdin/metrics.hpp"

using namespace rocdin;

namespace {

ScoreDataset dataset(const std::vector<double>& n_scores,
                     const std::vector<double>& d_scores) {
    ScoreDataset ds;
    int line = 2;
    for (double s : n_scores) {
        ds.records.push_back({s, ScoreLabel::n, line++});
        ++ds.n0;
    }
    for (double s : d_scores) {
        ds.records.push_back({s, ScoreLabel::d, line++});
        ++ds.n1;
    }
    return ds;
}

// oracle: brute-force pair counting with the half-weight tie convention
double pair_count_auc(const std::vector<double>& n_scores,
                      const std::vector<double>& d_scores) {
    double wins = 0.0;
    for (double d : d_scores)
        for (double n : n_scores) {
            if (d > n)
                wins += 1.0;
            else if (d == n)
                wins += 0.5;
        }
    return wins / (static_cast<double>(n_scores.size()) * d_scores.size());
}

bool has_point(const std::vector<RocPoint>& pts, double u, double s) {
    for (const RocPoint& p : pts)
        if (p.fpp == u && p.sensitivity == s) return true;
    return false;
}

} // namespace

TEST_CASE("csv parsing") {
    std::istringstream ok("score,label\n1.2,N\n3.4,D\n");
    const ScoreDataset ds = parse_scores(ok);
    CHECK(ds.n0 == 1);
    CHECK(ds.n1 == 1);
    CHECK(ds.records[0].score == 1.2);
    CHECK(ds.records[0].line == 2);

    // labels are case-insensitive, CRLF and blank lines tolerated
    std::istringstream mixed("score,label\r\n1,n\r\n\r\n2,d\r\n");
    const ScoreDataset m = parse_scores(mixed);
    CHECK(m.n0 == 1);
    CHECK(m.n1 == 1);

    std::istringstream bad_score("score,label\nx,D\n");
    try {
        parse_scores(bad_score);
        FAIL("expected MalformedRowError");
    } catch (const MalformedRowError& e) {
        CHECK(e.line == 2);
    }

    std::istringstream bad_label("score,label\n1,N\n2,Q\n");
    try {
        parse_scores(bad_label);
        FAIL("expected UnknownLabelError");
    } catch (const UnknownLabelError& e) {
        CHECK(e.line == 3);
    }

    std::istringstream only_n("score,label\n1,N\n2,N\n");
    CHECK_THROWS_AS(parse_scores(only_n), EmptyClassError);

    std::istringstream no_header("1,N\n2,D\n");
    CHECK_THROWS_AS(parse_scores(no_header), MalformedRowError);
}

TEST_CASE("empirical roc vertices from the threshold sweep") {
    // perfect separation
    const RocCurve perfect = empirical_roc(dataset({1, 2}, {3, 4}));
    const std::vector<RocPoint>& pp = perfect.points();
    CHECK(has_point(pp, 0.0, 0.0));
    CHECK(has_point(pp, 0.0, 0.5));
    CHECK(has_point(pp, 0.0, 1.0));
    CHECK(has_point(pp, 1.0, 1.0));

    // indistinguishable classes collapse to the diagonal
    const RocCurve diag = empirical_roc(dataset({1, 2}, {1, 2}));
    const std::vector<RocPoint>& dp = diag.points();
    REQUIRE(dp.size() == 3);
    CHECK(has_point(dp, 0.0, 0.0));
    CHECK(has_point(dp, 0.5, 0.5));
    CHECK(has_point(dp, 1.0, 1.0));

    // interleaved scores: thresholds 4,3,2,1
    const RocCurve inter = empirical_roc(dataset({1, 3}, {2, 4}));
    const std::vector<RocPoint>& ip = inter.points();
    REQUIRE(ip.size() == 5);
    CHECK(ip[0].fpp == 0.0);
    CHECK(ip[0].sensitivity == 0.0);
    CHECK(has_point(ip, 0.0, 0.5));
    CHECK(has_point(ip, 0.5, 0.5));
    CHECK(has_point(ip, 0.5, 1.0));
    CHECK(ip[4].fpp == 1.0);
    CHECK(ip[4].sensitivity == 1.0);
}

TEST_CASE("empirical auc matches intuition and oracles") {
    CHECK(empirical_auc(dataset({1, 2}, {3, 4})) == 1.0);
    CHECK(empirical_auc(dataset({1, 2}, {1, 2})) == 0.5);
    CHECK(empirical_auc(dataset({1, 3}, {2, 4})) ==
          doctest::Approx(0.75).epsilon(1e-14));
    CHECK(empirical_auc(dataset({1, 3}, {2, 4})) ==
          doctest::Approx(pair_count_auc({1, 3}, {2, 4})).epsilon(1e-14));
}

TEST_CASE("trapezoid auc equals the rank estimator on random datasets") {
    std::mt19937 rng(99173);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n0 = 1 + rng() % 20;
        const std::size_t n1 = 1 + rng() % 20;
        std::vector<double> ns, dsco;
        // small integer grid forces plenty of ties
        for (std::size_t i = 0; i < n0; ++i) ns.push_back(static_cast<double>(rng() % 8));
        for (std::size_t i = 0; i < n1; ++i) dsco.push_back(static_cast<double>(rng() % 8) + (rng() % 2 ? 0.5 : 0.0));
        const ScoreDataset ds = dataset(ns, dsco);
        const double trap = empirical_auc(ds);
        const double oracle = pair_count_auc(ns, dsco);
        CHECK(std::fabs(trap - oracle) <= 1e-12);
    }
}

TEST_CASE("label flip reflects the auc") {
    std::mt19937 rng(5150);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> ns, dsco;
        for (int i = 0; i < 6; ++i) ns.push_back(static_cast<double>(rng() % 10));
        for (int i = 0; i < 9; ++i) dsco.push_back(static_cast<double>(rng() % 10));
        const double a = empirical_auc(dataset(ns, dsco));
        const double flipped = empirical_auc(dataset(dsco, ns));
        CHECK(std::fabs(flipped - (1.0 - a)) <= 1e-12);
    }
}

TEST_CASE("empirical roc is monotone in both coordinates") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> ns, dsco;
        for (int i = 0; i < 12; ++i) ns.push_back(static_cast<double>(rng() % 6));
        for (int i = 0; i < 7; ++i) dsco.push_back(static_cast<double>(rng() % 6));
        const RocCurve curve = empirical_roc(dataset(ns, dsco));
        const std::vector<RocPoint>& pts = curve.points();
        for (std::size_t i = 1; i < pts.size(); ++i) {
            CHECK(pts[i].fpp >= pts[i - 1].fpp);
            CHECK(pts[i].sensitivity >= pts[i - 1].sensitivity);
        }
    }
}

TEST_CASE("kde density basics") {
    const ScoreDataset tiny = dataset({1, 2, 3}, {1.5, 2.5, 3.5, 4.0, 4.5});
    CHECK_THROWS_AS(kde_density(tiny, ScoreLabel::n), TooFewPointsError);
    CHECK_NOTHROW(kde_density(tiny, ScoreLabel::d));

    const ScoreDataset flat = dataset({2, 2, 2, 2, 2}, {1, 2, 3, 4, 5});
    CHECK_THROWS_AS(kde_density(flat, ScoreLabel::n), TooFewPointsError);

    const ContinuousDistribution k = kde_density(flat, ScoreLabel::d);
    CHECK(k.approximate());
    const IntegralResult nrm = integrate(
        [&k](double x) { return k.pdf(x); }, k.support().lo, k.support().hi);
    CHECK(std::fabs(nrm.value - 1.0) <= 1e-6);
    // quantile round trip through the mixture cdf
    for (double p : {0.1, 0.5, 0.9})
        CHECK(std::fabs(k.cdf(k.quantile(p)) - p) <= 1e-8);
}

TEST_CASE("kde dinegentropy approximates the analytic value") {
    // 1e4 uniform scores as class N, 1e4 beta(2,6) scores as class D, both by
    // inverse-cdf sampling from one deterministic stream.
    std::mt19937 rng(20200801);
    auto uni = [&rng] { return (static_cast<double>(rng()) + 0.5) / 4294967296.0; };
    const ContinuousDistribution beta26 = make_beta(2, 6);
    ScoreDataset ds;
    int line = 2;
    for (int i = 0; i < 10000; ++i) {
        ds.records.push_back({uni(), ScoreLabel::n, line++});
        ++ds.n0;
        ds.records.push_back({beta26.quantile(uni()), ScoreLabel::d, line++});
        ++ds.n1;
    }
    const ContinuousDistribution kn = kde_density(ds, ScoreLabel::n);
    const ContinuousDistribution kd = kde_density(ds, ScoreLabel::d);
    const MetricEstimate j = dinegentropy(kn, kd);
    const double analytic = (1201.0 / 420.0) / std::log(2.0); // J(beta(2,6), U)
    CHECK(std::fabs(j.value - analytic) / analytic <= 0.15);  // KDE bias allowance
}
