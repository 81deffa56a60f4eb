#include "rocdin/distribution.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "rocdin/errors.hpp"

namespace rocdin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);

std::string fmt_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// DistributionModel defaults

double DistributionModel::log2_pdf(double x) const { return std::log2(pdf(x)); }
double DistributionModel::log2_quantile(double p) const { return std::log2(quantile(p)); }
double DistributionModel::log2_pdf_at_quantile(double p) const { return log2_pdf(quantile(p)); }
double DistributionModel::log2_pdf_given_log2x(double log2_x) const {
    return log2_pdf(std::exp2(log2_x));
}

// ---------------------------------------------------------------------------
// Root finding

namespace detail {

double solve_monotone(const std::function<double(double)>& fn,
                      double lo, double hi, double target, double x_tol) {
    double flo = fn(lo) - target;
    if (flo >= 0.0) return lo;
    double fhi = fn(hi) - target;
    if (fhi <= 0.0) return hi;

    double x0 = lo, f0 = flo;
    double x1 = hi, f1 = fhi;
    bool secant_turn = true;
    for (int iter = 0; iter < 220 && (x1 - x0) > x_tol; ++iter) {
        double xm;
        if (secant_turn && f1 != f0) {
            xm = x1 - f1 * (x1 - x0) / (f1 - f0);
            const double guard = 0.01 * (x1 - x0);
            if (!(xm > x0 + guard && xm < x1 - guard))
                xm = x0 + 0.5 * (x1 - x0);
        } else {
            xm = x0 + 0.5 * (x1 - x0);
        }
        secant_turn = !secant_turn; // alternate so the bracket provably shrinks
        const double fm = fn(xm) - target;
        if (fm == 0.0) return xm;
        if (fm < 0.0) {
            x0 = xm;
            f0 = fm;
        } else {
            x1 = xm;
            f1 = fm;
        }
    }
    return x0 + 0.5 * (x1 - x0);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Regularized incomplete beta

namespace {

// Continued fraction for I_x(a,b) (Lentz's algorithm).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEpsCf = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEpsCf) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("incomplete beta requires a > 0 and b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta);
    // Branch keeps the continued fraction in its fast-converging region.
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

// ---------------------------------------------------------------------------
// Families

namespace {

class BetaModel final : public DistributionModel {
public:
    BetaModel(double alpha, double beta) : a_(alpha), b_(beta) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw DomainError("beta distribution requires alpha > 0 and beta > 0");
        log_beta_ = std::lgamma(a_) + std::lgamma(b_) - std::lgamma(a_ + b_);
    }

    double pdf(double x) const override {
        if (x < 0.0 || x > 1.0) return 0.0;
        if (x == 0.0)
            return a_ < 1.0 ? kInf : (a_ > 1.0 ? 0.0 : std::exp(-log_beta_));
        if (x == 1.0)
            return b_ < 1.0 ? kInf : (b_ > 1.0 ? 0.0 : std::exp(-log_beta_));
        return std::exp((a_ - 1.0) * std::log(x) + (b_ - 1.0) * std::log1p(-x) -
                        log_beta_);
    }

    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return regularized_incomplete_beta(a_, b_, x);
    }

    double quantile(double p) const override {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) return 1.0;
        if (a_ == 1.0) return -std::expm1(std::log1p(-p) / b_); // 1-(1-p)^(1/b)
        if (b_ == 1.0) return std::pow(p, 1.0 / a_);
        auto f = [this](double x) { return cdf(x); };
        return detail::solve_monotone(f, 1e-15, 1.0 - 1e-15, p, 1e-13);
    }

    Interval support() const override { return {0.0, 1.0}; }

    std::string spec_string() const override {
        return "beta:" + fmt_param(a_) + "," + fmt_param(b_);
    }

    double log2_pdf(double x) const override {
        if (x <= 0.0 || x >= 1.0) return std::log2(pdf(x));
        return ((a_ - 1.0) * std::log(x) + (b_ - 1.0) * std::log1p(-x) -
                log_beta_) /
               kLn2;
    }

    double log2_pdf_given_log2x(double log2_x) const override {
        if (log2_x > -512.0) return log2_pdf(std::exp2(log2_x));
        // x too small to materialize: (1-x) term vanishes.
        return (a_ - 1.0) * log2_x - log_beta_ / kLn2;
    }

private:
    double a_, b_, log_beta_;
};

class PowerRootModel final : public DistributionModel {
public:
    explicit PowerRootModel(double n) : n_(n) {
        if (!(n >= 1.0)) throw DomainError("power-root distribution requires n >= 1");
    }

    double pdf(double x) const override {
        if (x < 0.0 || x > 1.0) return 0.0;
        if (x == 0.0) return n_ > 1.0 ? kInf : 1.0;
        return std::pow(x, (1.0 - n_) / n_) / n_;
    }

    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::pow(x, 1.0 / n_);
    }

    double quantile(double p) const override {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) return 1.0;
        return std::pow(p, n_);
    }

    Interval support() const override { return {0.0, 1.0}; }

    std::string spec_string() const override { return "power:" + fmt_param(n_); }

    double log2_pdf(double x) const override {
        if (x < 0.0 || x > 1.0) return -kInf;
        if (x == 0.0) return n_ > 1.0 ? kInf : 0.0;
        return -std::log2(n_) + (1.0 - n_) / n_ * std::log2(x);
    }

    double log2_quantile(double p) const override { return n_ * std::log2(p); }

    double log2_pdf_at_quantile(double p) const override {
        return -std::log2(n_) + (1.0 - n_) * std::log2(p);
    }

    double log2_pdf_given_log2x(double log2_x) const override {
        return -std::log2(n_) + (1.0 - n_) / n_ * log2_x;
    }

    bool prefers_quantile_integration() const override { return n_ > 1.0; }
    double quantile_integration_priority() const override { return n_; }

private:
    double n_;
};

class Uniform01Model final : public DistributionModel {
public:
    double pdf(double x) const override { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; }
    double cdf(double x) const override { return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x); }
    double quantile(double p) const override { return p; }
    Interval support() const override { return {0.0, 1.0}; }
    std::string spec_string() const override { return "uniform"; }
    double log2_pdf(double x) const override {
        return (x >= 0.0 && x <= 1.0) ? 0.0 : -kInf;
    }
    double log2_quantile(double p) const override { return std::log2(p); }
    double log2_pdf_at_quantile(double) const override { return 0.0; }
    double log2_pdf_given_log2x(double log2_x) const override {
        return log2_x <= 0.0 ? 0.0 : -kInf;
    }
};

class NormalModel final : public DistributionModel {
public:
    NormalModel(double mu, double sigma) : mu_(mu), sigma_(sigma) {
        if (!std::isfinite(mu)) throw DomainError("normal distribution requires finite mu");
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw DomainError("normal distribution requires sigma > 0");
        log_norm_ = std::log(sigma_) + 0.5 * std::log(2.0 * M_PI);
    }

    double pdf(double x) const override {
        const double z = (x - mu_) / sigma_;
        return std::exp(-0.5 * z * z - log_norm_);
    }

    double cdf(double x) const override {
        const double z = (x - mu_) / sigma_;
        return 0.5 * std::erfc(-z / M_SQRT2);
    }

    double quantile(double p) const override {
        if (p <= 0.0) return -kInf;
        if (p >= 1.0) return kInf;
        auto f = [this](double x) { return cdf(x); };
        return detail::solve_monotone(f, mu_ - 40.0 * sigma_, mu_ + 40.0 * sigma_,
                                      p, 1e-12 * sigma_);
    }

    Interval support() const override { return {-kInf, kInf}; }

    std::string spec_string() const override {
        return "normal:" + fmt_param(mu_) + "," + fmt_param(sigma_);
    }

    double log2_pdf(double x) const override {
        const double z = (x - mu_) / sigma_;
        return (-0.5 * z * z - log_norm_) / kLn2;
    }

private:
    double mu_, sigma_, log_norm_;
};

class ExponentialModel final : public DistributionModel {
public:
    explicit ExponentialModel(double rate) : rate_(rate) {
        if (!(rate > 0.0) || !std::isfinite(rate))
            throw DomainError("exponential distribution requires rate > 0");
    }

    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        return rate_ * std::exp(-rate_ * x);
    }

    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return -std::expm1(-rate_ * x);
    }

    double quantile(double p) const override {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) return kInf;
        return -std::log1p(-p) / rate_;
    }

    Interval support() const override { return {0.0, kInf}; }

    std::string spec_string() const override { return "exp:" + fmt_param(rate_); }

    double log2_pdf(double x) const override {
        if (x < 0.0) return -kInf;
        return (std::log(rate_) - rate_ * x) / kLn2;
    }

private:
    double rate_;
};

} // namespace

// ---------------------------------------------------------------------------
// Value wrapper and factories

ContinuousDistribution::ContinuousDistribution(
    std::shared_ptr<const DistributionModel> model)
    : model_(std::move(model)) {
    if (!model_) throw DomainError("null distribution model");
}

double ContinuousDistribution::pdf(double x) const { return model_->pdf(x); }
double ContinuousDistribution::cdf(double x) const { return model_->cdf(x); }

double ContinuousDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("quantile requires p in [0,1]");
    return model_->quantile(p);
}

ContinuousDistribution make_beta(double alpha, double beta) {
    return ContinuousDistribution(std::make_shared<BetaModel>(alpha, beta));
}

ContinuousDistribution make_power_root(double n) {
    return ContinuousDistribution(std::make_shared<PowerRootModel>(n));
}

ContinuousDistribution make_uniform01() {
    return ContinuousDistribution(std::make_shared<Uniform01Model>());
}

ContinuousDistribution make_normal(double mu, double sigma) {
    return ContinuousDistribution(std::make_shared<NormalModel>(mu, sigma));
}

ContinuousDistribution make_exponential(double rate) {
    return ContinuousDistribution(std::make_shared<ExponentialModel>(rate));
}

// ---------------------------------------------------------------------------
// Spec-string parsing

namespace {

double parse_number(const std::string& token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw DomainError("malformed numeric parameter '" + token + "'");
    return v;
}

std::vector<double> parse_params(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string token =
            s.substr(start, comma == std::string::npos ? std::string::npos
                                                       : comma - start);
        out.push_back(parse_number(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace

ContinuousDistribution parse_distribution_spec(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? std::string() : spec.substr(colon + 1);

    if (family == "uniform") {
        if (!rest.empty())
            throw DomainError("uniform takes no parameters: '" + spec + "'");
        return make_uniform01();
    }
    if (rest.empty())
        throw DomainError("distribution spec '" + spec + "' is missing parameters");
    const std::vector<double> params = parse_params(rest);

    auto want = [&](std::size_t n) {
        if (params.size() != n)
            throw DomainError("distribution spec '" + spec + "' expects " +
                              std::to_string(n) + " parameter(s)");
    };
    if (family == "beta") {
        want(2);
        return make_beta(params[0], params[1]);
    }
    if (family == "power") {
        want(1);
        return make_power_root(params[0]);
    }
    if (family == "normal") {
        want(2);
        return make_normal(params[0], params[1]);
    }
    if (family == "exp") {
        want(1);
        return make_exponential(params[0]);
    }
    throw DomainError("unknown distribution family in spec '" + spec + "'");
}

} // namespace rocdin
