#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "rocdin/distribution.hpp"
#include "rocdin/errors.hpp"
#include "rocdin/quadrature.hpp"

using namespace rocdin;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<ContinuousDistribution> all_families() {
    return {make_beta(1, 3),      make_beta(2, 6),     make_beta(0.7, 2.5),
            make_power_root(1),   make_power_root(4),  make_power_root(10),
            make_uniform01(),     make_normal(0, 1),   make_normal(-2, 0.5),
            make_exponential(1),  make_exponential(2.5)};
}

// closed-form beta(1,3): cdf 1-(1-x)^3
double beta13_cdf(double x) { return 1.0 - std::pow(1.0 - x, 3.0); }
// closed-form beta(2,6): I_x(2,6) = 1 - (1-x)^7 - 7x(1-x)^6
double beta26_cdf(double x) {
    return 1.0 - std::pow(1.0 - x, 7.0) - 7.0 * x * std::pow(1.0 - x, 6.0);
}

} // namespace

TEST_CASE("construction rejects invalid parameters") {
    CHECK_THROWS_AS(make_beta(0, 3), DomainError);
    CHECK_THROWS_AS(make_beta(1, -1), DomainError);
    CHECK_THROWS_AS(make_power_root(0.5), DomainError);
    CHECK_THROWS_AS(make_normal(0, 0), DomainError);
    CHECK_THROWS_AS(make_exponential(-2), DomainError);
}

TEST_CASE("pdf spot values") {
    CHECK(make_beta(1, 3).pdf(0.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(make_uniform01().pdf(0.4) == 1.0);
    CHECK(make_power_root(10).pdf(1.0) == doctest::Approx(0.1).epsilon(1e-14));
    // outside support
    CHECK(make_beta(2, 6).pdf(-0.5) == 0.0);
    CHECK(make_exponential(1).pdf(-1.0) == 0.0);
    // singular endpoint is a signaled infinity, not an error
    CHECK(std::isinf(make_power_root(10).pdf(0.0)));
}

TEST_CASE("cdf spot values") {
    CHECK(make_beta(1, 3).cdf(0.5) == doctest::Approx(0.875).epsilon(1e-13));
    CHECK(make_power_root(4).cdf(0.0625) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(make_uniform01().cdf(0.3) == 0.3);
    // clamps outside support
    CHECK(make_beta(2, 6).cdf(-1.0) == 0.0);
    CHECK(make_beta(2, 6).cdf(2.0) == 1.0);
}

TEST_CASE("quantile spot values") {
    CHECK(make_uniform01().quantile(0.7) == 0.7);
    CHECK(make_beta(1, 3).quantile(0.875) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(make_power_root(10).quantile(0.5) ==
          doctest::Approx(9.765625e-4).epsilon(1e-14));
    CHECK(make_normal(0, 1).quantile(0.0) == -kInf);
    CHECK(make_exponential(1).quantile(1.0) == kInf);
    CHECK_THROWS_AS(make_uniform01().quantile(1.5), DomainError);
    CHECK_THROWS_AS(make_uniform01().quantile(-0.1), DomainError);
}

TEST_CASE("regularized incomplete beta against closed forms") {
    for (int i = 1; i < 50; ++i) {
        const double x = i / 50.0;
        CHECK(regularized_incomplete_beta(1, 3, x) ==
              doctest::Approx(beta13_cdf(x)).epsilon(1e-13));
        CHECK(std::fabs(regularized_incomplete_beta(2, 6, x) - beta26_cdf(x)) <=
              1e-13);
    }
    // parameter-symmetric branch: I_x(a,b) = 1 - I_(1-x)(b,a)
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = 0.3 + (rng() / 4294967296.0) * 5.0;
        const double b = 0.3 + (rng() / 4294967296.0) * 5.0;
        const double x = 0.01 + (rng() / 4294967296.0) * 0.98;
        const double lhs = regularized_incomplete_beta(a, b, x);
        const double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
        CHECK(std::fabs(lhs - rhs) <= 1e-13);
    }
}

TEST_CASE("round trip cdf(quantile(p)) = p") {
    for (const auto& dist : all_families()) {
        for (int k = 1; k <= 99; ++k) {
            const double p = k / 100.0;
            const double x = dist.quantile(p);
            CHECK(std::fabs(dist.cdf(x) - p) <= 1e-8);
        }
    }
}

TEST_CASE("round trip quantile(cdf(x)) = x inside support") {
    for (const auto& dist : all_families()) {
        const Interval s = dist.support();
        const double lo = std::isinf(s.lo) ? dist.quantile(0.001) : s.lo;
        const double hi = std::isinf(s.hi) ? dist.quantile(0.999) : s.hi;
        for (int k = 1; k < 40; ++k) {
            const double x = lo + (hi - lo) * k / 40.0;
            const double p = dist.cdf(x);
            if (p <= 0.0 || p >= 1.0) continue;
            const double back = dist.quantile(p);
            CHECK(std::fabs(back - x) <= 1e-8 * std::max(1.0, std::fabs(x)));
        }
    }
}

TEST_CASE("cdf is non-decreasing on a 1000-point grid") {
    for (const auto& dist : all_families()) {
        const Interval s = dist.support();
        const double lo = std::isinf(s.lo) ? dist.quantile(1e-6) : s.lo;
        const double hi = std::isinf(s.hi) ? dist.quantile(1.0 - 1e-6) : s.hi;
        double prev = -1.0;
        for (int k = 0; k <= 1000; ++k) {
            const double x = lo + (hi - lo) * k / 1000.0;
            const double c = dist.cdf(x);
            CHECK(c >= prev);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            prev = c;
        }
    }
}

TEST_CASE("pdf integrates to one over the support") {
    QuadratureConfig cfg;
    for (const auto& dist : all_families()) {
        const Interval s = dist.support();
        auto f = [&dist](double x) { return dist.pdf(x); };
        const IntegralResult r = integrate(f, s.lo, s.hi, cfg);
        CHECK(std::fabs(r.value - 1.0) <= 1e-6);
    }
}

TEST_CASE("power root with n=1 matches the uniform pointwise") {
    const ContinuousDistribution p1 = make_power_root(1);
    const ContinuousDistribution u = make_uniform01();
    for (int k = 0; k <= 100; ++k) {
        const double x = k / 100.0;
        CHECK(std::fabs(p1.pdf(x) - u.pdf(x)) <= 1e-12);
        CHECK(std::fabs(p1.cdf(x) - u.cdf(x)) <= 1e-12);
    }
}

TEST_CASE("log2_pdf agrees with log2 of pdf where both are finite") {
    for (const auto& dist : all_families()) {
        for (int k = 1; k < 50; ++k) {
            const double x = dist.quantile(k / 50.0);
            const double d = dist.pdf(x);
            if (!(d > 0.0) || std::isinf(d)) continue;
            CHECK(dist.log2_pdf(x) ==
                  doctest::Approx(std::log2(d)).epsilon(1e-10));
        }
    }
}

TEST_CASE("quantile-domain hooks compose consistently") {
    const ContinuousDistribution pr = make_power_root(10);
    for (int k = 1; k < 20; ++k) {
        const double v = k / 20.0;
        CHECK(pr.log2_quantile(v) ==
              doctest::Approx(std::log2(pr.quantile(v))).epsilon(1e-12));
        CHECK(pr.log2_pdf_at_quantile(v) ==
              doctest::Approx(pr.log2_pdf(pr.quantile(v))).epsilon(1e-10));
        CHECK(pr.log2_pdf_given_log2x(pr.log2_quantile(v)) ==
              doctest::Approx(pr.log2_pdf_at_quantile(v)).epsilon(1e-10));
    }
    // the hooks exist so steep laws never materialize sub-normal quantiles
    const ContinuousDistribution steep = make_power_root(1000);
    const double l = steep.log2_pdf_at_quantile(0.25);
    CHECK(std::isfinite(l));
    CHECK(steep.prefers_quantile_integration());
    CHECK_FALSE(make_power_root(1).prefers_quantile_integration());
}

TEST_CASE("exponential and normal closed forms") {
    const ContinuousDistribution e = make_exponential(2.0);
    CHECK(e.cdf(1.0) == doctest::Approx(-std::expm1(-2.0)).epsilon(1e-14));
    CHECK(e.quantile(0.5) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-14));

    const ContinuousDistribution n = make_normal(0, 1);
    CHECK(n.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(n.cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-12));
    CHECK(n.quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
}

TEST_CASE("concurrent evaluation matches serial evaluation") {
    // models are immutable and evaluations pure, so four threads sweeping the
    // same grid must reproduce the serial values bit for bit
    const ContinuousDistribution d = make_beta(2, 6);
    std::vector<double> serial(256);
    for (int k = 0; k < 256; ++k) serial[k] = d.cdf((k + 0.5) / 256.0);

    std::vector<std::thread> pool;
    std::vector<std::vector<double>> results(4, std::vector<double>(256));
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&d, &results, t] {
            for (int k = 0; k < 256; ++k)
                results[t][k] = d.cdf((k + 0.5) / 256.0);
        });
    }
    for (auto& th : pool) th.join();
    for (int t = 0; t < 4; ++t)
        for (int k = 0; k < 256; ++k) CHECK(results[t][k] == serial[k]);
}

TEST_CASE("spec string parsing") {
    CHECK(parse_distribution_spec("beta:1,3").spec_string() == "beta:1,3");
    CHECK(parse_distribution_spec("power:10").spec_string() == "power:10");
    CHECK(parse_distribution_spec("uniform").spec_string() == "uniform");
    CHECK(parse_distribution_spec("normal:0,1").spec_string() == "normal:0,1");
    CHECK(parse_distribution_spec("exp:1.5").spec_string() == "exp:1.5");
    CHECK(parse_distribution_spec("beta:0.5,2.25").cdf(1.0) == 1.0);

    CHECK_THROWS_AS(parse_distribution_spec("beta:1"), DomainError);
    CHECK_THROWS_AS(parse_distribution_spec("beta:1,3,5"), DomainError);
    CHECK_THROWS_AS(parse_distribution_spec("gamma:1,1"), DomainError);
    CHECK_THROWS_AS(parse_distribution_spec("beta:one,3"), DomainError);
    CHECK_THROWS_AS(parse_distribution_spec("uniform:1"), DomainError);
    CHECK_THROWS_AS(parse_distribution_spec("power:0.2"), DomainError);
}
