#pragma once

#include <functional>
#include <memory>
#include <string>

namespace rocdin {

/// Support interval; lo/hi may be infinite.
struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Abstract univariate law. Implementations are immutable after construction
/// and all evaluations are pure, so models are safe to share across threads.
///
/// Besides pdf/cdf/quantile, models expose log-domain hooks used by the
/// metrics integrators: log2_pdf keeps log-ratio integrands finite where the
/// raw densities under- or overflow, and the *_at_quantile / *_given_log2x
/// variants let steep laws (PowerRoot with large n) be integrated in their
/// own quantile domain without materializing sub-normal x values.
class DistributionModel {
public:
    virtual ~DistributionModel() = default;

    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double quantile(double p) const = 0;
    virtual Interval support() const = 0;
    virtual std::string spec_string() const = 0;

    virtual double log2_pdf(double x) const;
    virtual double log2_quantile(double p) const;
    virtual double log2_pdf_at_quantile(double p) const;
    virtual double log2_pdf_given_log2x(double log2_x) const;

    /// True when integrals against this density should be substituted into
    /// its quantile domain (mass concentrated below double range).
    virtual bool prefers_quantile_integration() const { return false; }
    /// Steepness key used to pick the substitution when both factors of a
    /// pairwise integral prefer their own quantile domain.
    virtual double quantile_integration_priority() const { return 0.0; }

    /// Nonparametric (KDE-backed) models report themselves as approximate.
    virtual bool approximate() const { return false; }
};

/// Value-semantic handle to an immutable distribution model.
class ContinuousDistribution {
public:
    explicit ContinuousDistribution(std::shared_ptr<const DistributionModel> model);

    double pdf(double x) const;
    double cdf(double x) const;
    /// Throws DomainError for p outside [0,1]; quantile(0)/quantile(1) return
    /// the support endpoints (possibly +-infinity).
    double quantile(double p) const;
    Interval support() const { return model_->support(); }
    std::string spec_string() const { return model_->spec_string(); }

    double log2_pdf(double x) const { return model_->log2_pdf(x); }
    double log2_quantile(double p) const { return model_->log2_quantile(p); }
    double log2_pdf_at_quantile(double p) const { return model_->log2_pdf_at_quantile(p); }
    double log2_pdf_given_log2x(double l) const { return model_->log2_pdf_given_log2x(l); }
    bool prefers_quantile_integration() const { return model_->prefers_quantile_integration(); }
    double quantile_integration_priority() const { return model_->quantile_integration_priority(); }
    bool approximate() const { return model_->approximate(); }

    const DistributionModel& model() const { return *model_; }

private:
    std::shared_ptr<const DistributionModel> model_;
};

// Parametric families. Parameters are validated here; evaluation never throws.
ContinuousDistribution make_beta(double alpha, double beta);
ContinuousDistribution make_power_root(double n); // CDF x^(1/n) on [0,1]
ContinuousDistribution make_uniform01();
ContinuousDistribution make_normal(double mu, double sigma);
ContinuousDistribution make_exponential(double rate);

/// Parses the CLI/config spec string: "beta:1,3", "power:10", "uniform",
/// "normal:0,1", "exp:1.5". Throws DomainError on malformed input.
ContinuousDistribution parse_distribution_spec(const std::string& spec);

/// Regularized incomplete beta I_x(a,b) by continued fraction with the
/// parameter-symmetric branch choice; absolute accuracy well below 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

namespace detail {
/// Finds x in [lo,hi] with fn(x) = target for non-decreasing fn, by a
/// bisection-secant hybrid. x_tol is an absolute width tolerance.
double solve_monotone(const std::function<double(double)>& fn,
                      double lo, double hi, double target, double x_tol);
} // namespace detail

} // namespace rocdin
