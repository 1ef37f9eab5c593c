#pragma once

#include "wwf/forecast.hpp"
#include "wwf/series.hpp"

#include <vector>

namespace wwf {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;
};

struct ArimaFit {
    ArimaOrder order;
    std::vector<double> phi;
    std::vector<double> theta;
    double mu = 0.0;     // mean of the differenced series (d == 0 only)
    double c = 0.0;      // implied constant, mu * (1 - sum phi)
    double sigma = 0.0;  // innovation scale
    double aicc = 0.0;
    bool fallback = false;  // stepwise search failed; (0, d, 0) mean model used
    std::vector<double> window;  // calibration values, for the forecast recursion
};

struct ArimaSearchConfig {
    int max_p = 5;
    int max_q = 5;
    int max_d = 2;
    double kpss_critical = 0.463;  // 5% level-stationarity critical value
};

// KPSS level-stationarity statistic with a Bartlett long-run variance window.
double kpss_statistic(const std::vector<double>& series);

// Differencing order by repeated KPSS tests, then stepwise AICc search over
// (p, q) starting from {(0,0),(1,0),(0,1),(1,1),(2,2)} with unit-neighborhood
// moves; coefficients by conditional sum of squares followed by exact
// Gaussian-likelihood refinement.
ArimaFit fit_arima(const CalibrationWindow& window,
                   const ArimaSearchConfig& search = {});

// h-step point forecast of the undifferenced series.
std::vector<double> arima_point_forecasts(const ArimaFit& fit, int max_horizon);

// Gaussian intervals from psi-weight variance accumulation; negatives clamped.
ForecastDistribution forecast_arima(const ArimaFit& fit, const EpiWeek& origin,
                                    int max_horizon, const std::vector<double>& alphas);

} // namespace wwf
