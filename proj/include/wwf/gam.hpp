#pragma once

#include "wwf/forecast.hpp"
#include "wwf/series.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wwf {

// Penalized cubic regression spline of the window on its time index, with a
// second-difference coefficient penalty and GCV-selected smoothing.
struct GamFit {
    double beta0 = 0.0;  // absorbed into the basis (kept for reporting)
    Eigen::VectorXd coeffs;
    std::vector<double> knots;
    double lambda = 0.0;
    double edf = 0.0;    // tr(H_lambda)
    double sigma = 0.0;  // sqrt(RSS / (n - edf))
    int n = 0;
    int basis_count = 0;
    Eigen::MatrixXd rinv;  // R^{-1} with R'R = B'B + lambda*P, for predictive variance
    double t_end = 0.0;
    double f_end = 0.0;      // fitted value at the window end
    double slope_end = 0.0;  // spline derivative at the window end
};

// basis_count < 0 selects the default rule min(10, n - 3). lambda_override,
// when >= 0, skips the GCV ladder (used by the penalty-limit checks).
GamFit fit_gam(const CalibrationWindow& window, int basis_count = -1,
               double lambda_override = -1.0);

// In-window spline evaluation (0 <= t <= n-1).
double gam_value(const GamFit& fit, double t);

// Point forecast at horizon h: linear extrapolation beyond the last knot.
double gam_point(const GamFit& fit, int horizon);

// Gaussian intervals with predictive variance inflated by extrapolation
// distance; negatives clamped.
ForecastDistribution forecast_gam(const GamFit& fit, const EpiWeek& origin,
                                  int max_horizon, const std::vector<double>& alphas);

} // namespace wwf
