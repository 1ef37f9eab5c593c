#pragma once

#include "wwf/forecast.hpp"
#include "wwf/rng.hpp"
#include "wwf/series.hpp"
#include "wwf/subepidemic.hpp"

#include <cstdint>
#include <vector>

namespace wwf {

struct BootstrapConfig {
    int B = 300;           // bootstrap realizations
    int refit_starts = 3;  // multistarts per realization (first is the point estimate)
    std::uint64_t seed = 0;
    int steps_per_week = 8;
};

// sigma-hat = sqrt(SSE / (n_d - m)). Throws when n_d <= m.
double residual_sigma(const SubEpidemicFit& fit, const CalibrationWindow& window);

// y*_t = f(t) + Normal(0, sigma^2), clamped at zero.
std::vector<double> simulate_dataset(const std::vector<double>& fitted_curve,
                                     double sigma, Rng& rng);

// Parametric bootstrap: refit the same model structure to each synthetic
// dataset, integrate forward, add observation noise, and summarize with
// empirical quantiles. Throws when more than half of the refits fail.
ForecastDistribution bootstrap_forecast(const SubEpidemicFit& fit,
                                        const CalibrationWindow& window, int max_horizon,
                                        const BootstrapConfig& config,
                                        const std::vector<double>& alphas);

} // namespace wwf
