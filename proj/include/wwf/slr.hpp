#pragma once

#include "wwf/forecast.hpp"
#include "wwf/series.hpp"

#include <vector>

namespace wwf {

// Ordinary least squares on the window's time index t = 0..n-1.
struct SlrFit {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double sigma = 0.0;  // residual scale, sqrt(RSS / (n - 2))
    int n = 0;
    double t_mean = 0.0;
    double sxx = 0.0;
};

SlrFit fit_slr(const CalibrationWindow& window);

// Gaussian prediction intervals with the standard regression predictive
// variance at the extrapolated time; negatives clamped to zero.
ForecastDistribution forecast_slr(const SlrFit& fit, const EpiWeek& origin,
                                  int max_horizon, const std::vector<double>& alphas);

// Point forecast at horizon h >= 0 (h = 0 is the in-sample fit at the origin).
double slr_point(const SlrFit& fit, int horizon);

} // namespace wwf
