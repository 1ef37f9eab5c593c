#pragma once

#include "wwf/epiweek.hpp"

#include <vector>

namespace wwf {

// Central (1-alpha) interval bounds.
struct IntervalBound {
    double alpha = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct QuantileForecast {
    double median = 0.0;
    std::vector<IntervalBound> intervals;  // sorted by alpha ascending

    const IntervalBound* find_alpha(double alpha) const;
};

struct HorizonForecast {
    QuantileForecast quantiles;
    std::vector<double> samples;  // empty for analytic (Gaussian) forecasters
};

// Per-origin probabilistic forecast for horizons 1..H.
struct ForecastDistribution {
    EpiWeek origin;
    std::vector<HorizonForecast> horizons;  // index h-1 is the h-week-ahead forecast
    int effective_samples = 0;              // bootstrap realizations that survived refit

    int max_horizon() const { return static_cast<int>(horizons.size()); }
};

// The alpha levels WIS is evaluated at (forecast-hub set, K=11). The 95%
// interval is the alpha=0.05 entry.
const std::vector<double>& default_alphas();

// Quantile by linear interpolation between order statistics. `sorted` must be
// ascending and non-empty.
double quantile_sorted(const std::vector<double>& sorted, double q);

// Median + central intervals from an empirical sample set; everything clamped
// at zero. Sorts a copy of `samples`.
QuantileForecast quantiles_from_samples(std::vector<double> samples,
                                        const std::vector<double>& alphas);

// Gaussian median + central intervals, clamped at zero.
QuantileForecast gaussian_quantiles(double mean, double sd,
                                    const std::vector<double>& alphas);

// Inverse standard normal CDF (Acklam's rational approximation, refined).
double normal_quantile(double p);

} // namespace wwf
