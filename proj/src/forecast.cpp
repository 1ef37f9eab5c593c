#include "wwf/forecast.hpp"

#include "wwf/error.hpp"

#include <algorithm>
#include <cmath>

namespace wwf {

const IntervalBound* QuantileForecast::find_alpha(double alpha) const {
    for (const auto& iv : intervals) {
        if (std::abs(iv.alpha - alpha) < 1e-12) return &iv;
    }
    return nullptr;
}

const std::vector<double>& default_alphas() {
    static const std::vector<double> alphas = {0.02, 0.05, 0.10, 0.20, 0.30, 0.40,
                                               0.50, 0.60, 0.70, 0.80, 0.90};
    return alphas;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) {
        throw Error(ErrorCategory::validation, "quantile of empty sample set");
    }
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0,
                                                        static_cast<double>(n - 1)));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

QuantileForecast quantiles_from_samples(std::vector<double> samples,
                                        const std::vector<double>& alphas) {
    std::sort(samples.begin(), samples.end());
    QuantileForecast q;
    q.median = std::max(0.0, quantile_sorted(samples, 0.5));
    for (double alpha : alphas) {
        IntervalBound iv;
        iv.alpha = alpha;
        iv.lower = std::max(0.0, quantile_sorted(samples, alpha / 2.0));
        iv.upper = std::max(0.0, quantile_sorted(samples, 1.0 - alpha / 2.0));
        q.intervals.push_back(iv);
    }
    std::sort(q.intervals.begin(), q.intervals.end(),
              [](const IntervalBound& a, const IntervalBound& b) { return a.alpha < b.alpha; });
    return q;
}

QuantileForecast gaussian_quantiles(double mean, double sd,
                                    const std::vector<double>& alphas) {
    QuantileForecast q;
    q.median = std::max(0.0, mean);
    for (double alpha : alphas) {
        const double z = normal_quantile(1.0 - alpha / 2.0);
        IntervalBound iv;
        iv.alpha = alpha;
        iv.lower = std::max(0.0, mean - z * sd);
        iv.upper = std::max(0.0, mean + z * sd);
        q.intervals.push_back(iv);
    }
    std::sort(q.intervals.begin(), q.intervals.end(),
              [](const IntervalBound& a, const IntervalBound& b) { return a.alpha < b.alpha; });
    return q;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCategory::numeric, "normal_quantile: p outside (0, 1)");
    }
    // Acklam's approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley refinement step against erfc.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

} // namespace wwf
