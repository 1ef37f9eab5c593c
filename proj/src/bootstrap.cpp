#include "wwf/bootstrap.hpp"

#include "wwf/error.hpp"
#include "wwf/rng.hpp"

#include <algorithm>
#include <cmath>

namespace wwf {

double residual_sigma(const SubEpidemicFit& fit, const CalibrationWindow& window) {
    const int n_d = static_cast<int>(window.values.size());
    if (n_d <= fit.m) {
        throw Error(ErrorCategory::validation,
                    "residual_sigma: n_d=" + std::to_string(n_d) +
                        " leaves no residual degrees of freedom (m=" +
                        std::to_string(fit.m) + ")");
    }
    return std::sqrt(fit.sse / (n_d - fit.m));
}

std::vector<double> simulate_dataset(const std::vector<double>& fitted_curve,
                                     double sigma, Rng& rng) {
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> out(fitted_curve.size());
    for (std::size_t t = 0; t < fitted_curve.size(); ++t) {
        out[t] = std::max(0.0, fitted_curve[t] + sigma * noise(rng));
    }
    return out;
}

ForecastDistribution bootstrap_forecast(const SubEpidemicFit& fit,
                                        const CalibrationWindow& window, int max_horizon,
                                        const BootstrapConfig& config,
                                        const std::vector<double>& alphas) {
    if (config.B < 1 || max_horizon < 1) {
        throw Error(ErrorCategory::validation,
                    "bootstrap_forecast: B and horizon must be >= 1");
    }
    const int n_d = static_cast<int>(window.values.size());
    const double sigma = residual_sigma(fit, window);
    const std::vector<double> curve =
        fitted_values(fit, n_d, config.steps_per_week);

    std::optional<double> thr;
    if (fit.params.n >= 2) thr = fit.params.c_thr;

    std::vector<std::vector<double>> samples(max_horizon);
    int failures = 0;
    for (int b = 0; b < config.B; ++b) {
        // Per-realization seed stream: realization order never matters.
        const std::uint64_t sub_seed = hash_combine(config.seed, static_cast<std::uint64_t>(b));
        Rng rng = make_rng(hash_combine(sub_seed, "noise"));

        CalibrationWindow synthetic = window;
        synthetic.values = simulate_dataset(curve, sigma, rng);
        try {
            const SubEpidemicFit refit =
                fit_nls(synthetic, fit.params.n, thr, config.refit_starts,
                        hash_combine(sub_seed, "starts"), config.steps_per_week,
                        &fit.params);
            const Trajectory traj =
                integrate(refit.params, n_d - 1 + max_horizon, config.steps_per_week);
            std::normal_distribution<double> obs_noise(0.0, 1.0);
            for (int h = 1; h <= max_horizon; ++h) {
                const double value = traj.c_tot[(n_d - 1 + h) * config.steps_per_week];
                samples[h - 1].push_back(
                    std::max(0.0, value + sigma * obs_noise(rng)));
            }
        } catch (const Error&) {
            ++failures;
        }
    }
    if (failures * 2 > config.B) {
        throw Error(ErrorCategory::fit_failure,
                    "bootstrap_forecast: " + std::to_string(failures) + " of " +
                        std::to_string(config.B) + " refits failed");
    }

    ForecastDistribution dist;
    dist.origin = window.origin;
    dist.effective_samples = config.B - failures;
    for (int h = 1; h <= max_horizon; ++h) {
        HorizonForecast hf;
        hf.samples = samples[h - 1];
        hf.quantiles = quantiles_from_samples(hf.samples, alphas);
        dist.horizons.push_back(std::move(hf));
    }
    return dist;
}

} // namespace wwf
