#include "wwf/slr.hpp"

#include "wwf/error.hpp"

#include <cmath>

namespace wwf {

SlrFit fit_slr(const CalibrationWindow& window) {
    const int n = static_cast<int>(window.values.size());
    if (n < 3) {
        throw Error(ErrorCategory::insufficient_data, "fit_slr: window shorter than 3");
    }
    SlrFit fit;
    fit.n = n;
    fit.t_mean = (n - 1) / 2.0;
    double sxy = 0.0;
    double y_mean = 0.0;
    for (int t = 0; t < n; ++t) y_mean += window.values[t];
    y_mean /= n;
    for (int t = 0; t < n; ++t) {
        const double dt = t - fit.t_mean;
        fit.sxx += dt * dt;
        sxy += dt * (window.values[t] - y_mean);
    }
    if (fit.sxx <= 0.0) {
        throw Error(ErrorCategory::numeric, "fit_slr: degenerate time design");
    }
    fit.beta1 = sxy / fit.sxx;
    fit.beta0 = y_mean - fit.beta1 * fit.t_mean;
    double rss = 0.0;
    for (int t = 0; t < n; ++t) {
        const double e = window.values[t] - (fit.beta0 + fit.beta1 * t);
        rss += e * e;
    }
    fit.sigma = std::sqrt(std::max(rss, 0.0) / (n - 2));
    return fit;
}

double slr_point(const SlrFit& fit, int horizon) {
    return fit.beta0 + fit.beta1 * (fit.n - 1 + horizon);
}

ForecastDistribution forecast_slr(const SlrFit& fit, const EpiWeek& origin,
                                  int max_horizon, const std::vector<double>& alphas) {
    ForecastDistribution dist;
    dist.origin = origin;
    for (int h = 1; h <= max_horizon; ++h) {
        const double t_star = fit.n - 1 + h;
        const double mean = slr_point(fit, h);
        const double lever = 1.0 + 1.0 / fit.n +
                             (t_star - fit.t_mean) * (t_star - fit.t_mean) / fit.sxx;
        const double sd = fit.sigma * std::sqrt(lever);
        HorizonForecast hf;
        hf.quantiles = gaussian_quantiles(mean, sd, alphas);
        dist.horizons.push_back(std::move(hf));
    }
    return dist;
}

} // namespace wwf
