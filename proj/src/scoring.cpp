#include "wwf/scoring.hpp"

#include "wwf/error.hpp"

#include <cmath>

namespace wwf {

namespace {

void check_lengths(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || a.size() != b.size()) {
        throw Error(ErrorCategory::validation,
                    "score: observed/predicted lengths differ or are empty");
    }
}

} // namespace

double mae(const std::vector<double>& observed, const std::vector<double>& predicted) {
    check_lengths(observed, predicted);
    double sum = 0.0;
    for (std::size_t j = 0; j < observed.size(); ++j) {
        sum += std::abs(observed[j] - predicted[j]);
    }
    return sum / static_cast<double>(observed.size());
}

double mse(const std::vector<double>& observed, const std::vector<double>& predicted) {
    check_lengths(observed, predicted);
    double sum = 0.0;
    for (std::size_t j = 0; j < observed.size(); ++j) {
        const double e = observed[j] - predicted[j];
        sum += e * e;
    }
    return sum / static_cast<double>(observed.size());
}

double interval_score(double lower, double upper, double alpha, double y) {
    if (lower > upper) {
        throw Error(ErrorCategory::validation, "interval_score: lower > upper");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCategory::validation, "interval_score: alpha outside (0, 1)");
    }
    double score = upper - lower;
    if (y < lower) score += (2.0 / alpha) * (lower - y);
    if (y > upper) score += (2.0 / alpha) * (y - upper);
    return score;
}

double wis(const QuantileForecast& forecast, double y, const std::vector<double>& alphas) {
    const double k = static_cast<double>(alphas.size());
    double total = 0.5 * std::abs(y - forecast.median);
    for (double alpha : alphas) {
        const IntervalBound* iv = forecast.find_alpha(alpha);
        if (!iv) {
            throw Error(ErrorCategory::validation,
                        "wis: forecast carries no interval for alpha=" +
                            std::to_string(alpha));
        }
        total += (alpha / 2.0) * interval_score(iv->lower, iv->upper, alpha, y);
    }
    return total / (k + 0.5);
}

double coverage95(const std::vector<CoverageEntry>& records) {
    if (records.empty()) {
        throw Error(ErrorCategory::validation, "coverage95: empty record list");
    }
    double covered = 0.0;
    for (const auto& rec : records) {
        if (rec.lower < rec.y && rec.y < rec.upper) covered += 1.0;
    }
    return covered / static_cast<double>(records.size());
}

double skill_score(double metric_mean_model, double metric_mean_slr) {
    if (!(metric_mean_slr > 0.0)) {
        throw Error(ErrorCategory::validation,
                    "skill_score: baseline mean must be positive");
    }
    return 1.0 - metric_mean_model / metric_mean_slr;
}

} // namespace wwf
