#pragma once

#include "wwf/forecast.hpp"
#include "wwf/series.hpp"

#include <cstdint>
#include <vector>

namespace wwf {

struct TrendCastConfig {
    int n_changepoints = 3;    // candidate trend breaks
    double cp_range = 0.8;     // candidates live in the first 80% of the window
    double l1_penalty = 0.01;  // shrinkage strength for the delta adjustments
    int sim_paths = 1000;      // simulated future paths for the intervals
};

// Piecewise-linear trend with L1-shrunk slope adjustments at candidate
// changepoints; forecast uncertainty from simulated future changepoints.
struct TrendCastFit {
    double offset = 0.0;     // intercept
    double base_rate = 0.0;  // initial slope
    std::vector<double> cp_times;
    std::vector<double> cp_deltas;
    double sigma = 0.0;     // residual scale
    double cp_scale = 0.0;  // Laplace scale of the historical deltas
    int n = 0;
};

TrendCastFit fit_trendcast(const CalibrationWindow& window,
                           const TrendCastConfig& config = {});

// Trend value at time t (t = 0..n-1 in-window; larger t extrapolates the
// final slope).
double trendcast_value(const TrendCastFit& fit, double t);

ForecastDistribution forecast_trendcast(const TrendCastFit& fit, const EpiWeek& origin,
                                        int max_horizon,
                                        const std::vector<double>& alphas,
                                        std::uint64_t seed,
                                        const TrendCastConfig& config = {});

} // namespace wwf
