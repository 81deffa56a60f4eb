#include "rocdin/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <set>
#include <string>

#include "rocdin/errors.hpp"

namespace rocdin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

std::vector<double> ScoreDataset::class_scores(ScoreLabel which) const {
    std::vector<double> out;
    for (const ScoreRecord& r : records)
        if (r.label == which) out.push_back(r.score);
    return out;
}

ScoreDataset parse_scores(std::istream& in) {
    ScoreDataset ds;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = strip(line);
        if (row.empty()) continue;
        if (!saw_header) {
            if (lower(row) != "score,label")
                throw MalformedRowError("expected header 'score,label', got '" + row + "'",
                                        line_no);
            saw_header = true;
            continue;
        }
        const std::size_t comma = row.find(',');
        if (comma == std::string::npos)
            throw MalformedRowError("row has no comma: '" + row + "'", line_no);
        const std::string score_tok = strip(row.substr(0, comma));
        const std::string label_tok = strip(row.substr(comma + 1));

        double score = 0.0;
        const char* first = score_tok.data();
        const char* last = score_tok.data() + score_tok.size();
        auto [ptr, ec] = std::from_chars(first, last, score);
        if (ec != std::errc{} || ptr != last || !std::isfinite(score))
            throw MalformedRowError("unparseable score '" + score_tok + "'", line_no);

        const std::string lab = lower(label_tok);
        ScoreLabel label;
        if (lab == "n")
            label = ScoreLabel::n;
        else if (lab == "d")
            label = ScoreLabel::d;
        else
            throw UnknownLabelError("unknown label '" + label_tok + "'", line_no);

        ds.records.push_back({score, label, line_no});
        (label == ScoreLabel::n ? ds.n0 : ds.n1)++;
    }
    if (!saw_header)
        throw MalformedRowError("empty input: missing 'score,label' header", 1);
    if (ds.n0 == 0 || ds.n1 == 0)
        throw EmptyClassError(ds.n0 == 0 ? "no rows labeled N" : "no rows labeled D");
    return ds;
}

RocCurve empirical_roc(const ScoreDataset& ds) {
    if (ds.n0 == 0 || ds.n1 == 0) throw EmptyClassError("both classes need rows");

    std::set<double, std::greater<double>> thresholds;
    std::vector<double> n_scores, d_scores;
    for (const ScoreRecord& r : ds.records) {
        thresholds.insert(r.score);
        (r.label == ScoreLabel::n ? n_scores : d_scores).push_back(r.score);
    }
    std::sort(n_scores.begin(), n_scores.end());
    std::sort(d_scores.begin(), d_scores.end());

    auto count_above = [](const std::vector<double>& sorted, double t) {
        return sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    };

    const double n0 = static_cast<double>(ds.n0);
    const double n1 = static_cast<double>(ds.n1);
    std::vector<RocPoint> pts;
    pts.push_back({0.0, 0.0});
    for (double t : thresholds) {
        const RocPoint p{static_cast<double>(count_above(n_scores, t)) / n0,
                         static_cast<double>(count_above(d_scores, t)) / n1};
        if (p.fpp != pts.back().fpp || p.sensitivity != pts.back().sensitivity)
            pts.push_back(p);
    }
    if (pts.back().fpp != 1.0 || pts.back().sensitivity != 1.0)
        pts.push_back({1.0, 1.0});
    return RocCurve::empirical(std::move(pts));
}

namespace {

// Rank-based estimator: (#{(i,j): d_j > n_i} + 0.5 * #ties) / (n0*n1),
// via midranks so large datasets stay O(m log m).
double rank_estimator_auc(const ScoreDataset& ds) {
    struct Entry {
        double score;
        ScoreLabel label;
    };
    std::vector<Entry> all;
    all.reserve(ds.records.size());
    for (const ScoreRecord& r : ds.records) all.push_back({r.score, r.label});
    std::sort(all.begin(), all.end(),
              [](const Entry& x, const Entry& y) { return x.score < y.score; });

    double rank_sum_d = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].score == all[i].score) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j); // 1-based
        for (std::size_t k = i; k < j; ++k)
            if (all[k].label == ScoreLabel::d) rank_sum_d += midrank;
        i = j;
    }
    const double n0 = static_cast<double>(ds.n0);
    const double n1 = static_cast<double>(ds.n1);
    const double u = rank_sum_d - n1 * (n1 + 1.0) / 2.0;
    return u / (n0 * n1);
}

} // namespace

double empirical_auc(const ScoreDataset& ds) {
    const RocCurve curve = empirical_roc(ds);
    const std::vector<RocPoint>& pts = curve.points();
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        area += (pts[i].fpp - pts[i - 1].fpp) * 0.5 *
                (pts[i].sensitivity + pts[i - 1].sensitivity);

    const double by_ranks = rank_estimator_auc(ds);
    if (std::fabs(area - by_ranks) > 1e-12)
        throw DisagreementError("trapezoid AUC " + std::to_string(area) +
                                " does not match the rank estimator " +
                                std::to_string(by_ranks));
    return area;
}

// ---------------------------------------------------------------------------
// Kernel density estimate

namespace {

double sample_sd(const std::vector<double>& xs) {
    const double m = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= m;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (m - 1.0));
}

// Type-7 (linear interpolation) sample quantile on sorted data.
double sorted_quantile(const std::vector<double>& sorted, double p) {
    const double idx = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double w = idx - static_cast<double>(lo);
    return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

class KdeModel final : public DistributionModel {
public:
    KdeModel(std::vector<double> samples, double bandwidth)
        : xs_(std::move(samples)), h_(bandwidth) {
        std::sort(xs_.begin(), xs_.end());
        norm_ = 1.0 / (static_cast<double>(xs_.size()) * h_ * std::sqrt(2.0 * M_PI));
    }

    double pdf(double x) const override {
        // Kernels beyond 40 bandwidths underflow; restrict to the window.
        const auto lo = std::lower_bound(xs_.begin(), xs_.end(), x - 40.0 * h_);
        const auto hi = std::upper_bound(lo, xs_.end(), x + 40.0 * h_);
        double s = 0.0;
        for (auto it = lo; it != hi; ++it) {
            const double z = (x - *it) / h_;
            s += std::exp(-0.5 * z * z);
        }
        return s * norm_;
    }

    double cdf(double x) const override {
        const auto lo = std::lower_bound(xs_.begin(), xs_.end(), x - 40.0 * h_);
        const auto hi = std::upper_bound(lo, xs_.end(), x + 40.0 * h_);
        double s = static_cast<double>(lo - xs_.begin()); // saturated kernels
        for (auto it = lo; it != hi; ++it)
            s += 0.5 * std::erfc(-(x - *it) / (h_ * M_SQRT2));
        return s / static_cast<double>(xs_.size());
    }

    double quantile(double p) const override {
        if (p <= 0.0) return -kInf;
        if (p >= 1.0) return kInf;
        const double lo = xs_.front() - 12.0 * h_;
        const double hi = xs_.back() + 12.0 * h_;
        auto f = [this](double x) { return cdf(x); };
        return detail::solve_monotone(f, lo, hi, p, 1e-11 * (hi - lo));
    }

    Interval support() const override { return {-kInf, kInf}; }

    std::string spec_string() const override {
        return "kde[m=" + std::to_string(xs_.size()) + "]";
    }

    double log2_pdf(double x) const override {
        const double d = pdf(x);
        if (d > 0.0) return std::log2(d);
        // All kernels underflowed: dominated by the nearest sample.
        auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
        double nearest = xs_.back();
        if (it != xs_.end()) nearest = *it;
        if (it != xs_.begin()) {
            const double lower_x = *(it - 1);
            if (std::fabs(x - lower_x) < std::fabs(x - nearest)) nearest = lower_x;
        }
        const double z = (x - nearest) / h_;
        return (-0.5 * z * z + std::log(norm_)) / kLn2;
    }

    bool approximate() const override { return true; }

private:
    std::vector<double> xs_;
    double h_;
    double norm_;
};

} // namespace

ContinuousDistribution kde_density(const ScoreDataset& ds, ScoreLabel which) {
    std::vector<double> xs = ds.class_scores(which);
    if (xs.size() < 5)
        throw TooFewPointsError("kernel density estimation needs at least 5 points, got " +
                                std::to_string(xs.size()));

    const double sd = sample_sd(xs);
    if (sd == 0.0)
        throw TooFewPointsError("kernel density estimation needs nonzero score spread");

    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    const double m = static_cast<double>(xs.size());
    const double h = 0.9 * spread * std::pow(m, -0.2);

    return ContinuousDistribution(std::make_shared<KdeModel>(std::move(xs), h));
}

} // namespace rocdin
