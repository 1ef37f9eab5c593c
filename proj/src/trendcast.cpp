#include "wwf/trendcast.hpp"

#include "wwf/error.hpp"
#include "wwf/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace wwf {

TrendCastFit fit_trendcast(const CalibrationWindow& window,
                           const TrendCastConfig& config) {
    const int n = static_cast<int>(window.values.size());
    if (n < 5) {
        throw Error(ErrorCategory::insufficient_data,
                    "fit_trendcast: window shorter than 5");
    }
    TrendCastFit fit;
    fit.n = n;

    const double t_max = n - 1.0;
    const auto [min_it, max_it] =
        std::minmax_element(window.values.begin(), window.values.end());
    if (*max_it - *min_it < 1e-12) {
        // Degenerate flat window.
        fit.offset = *min_it;
        fit.base_rate = 0.0;
        fit.sigma = 0.0;
        fit.cp_scale = 0.0;
        return fit;
    }

    for (int j = 1; j <= config.n_changepoints; ++j) {
        fit.cp_times.push_back(config.cp_range * t_max * j / config.n_changepoints);
    }
    const int n_cp = static_cast<int>(fit.cp_times.size());
    const int dim = 2 + n_cp;

    Eigen::MatrixXd design(n, dim);
    for (int t = 0; t < n; ++t) {
        design(t, 0) = 1.0;
        design(t, 1) = t;
        for (int j = 0; j < n_cp; ++j) {
            design(t, 2 + j) = std::max(0.0, t - fit.cp_times[j]);
        }
    }
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(window.values.data(), n);

    // L1 shrinkage on the deltas via iteratively reweighted ridge.
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(dim);
    const Eigen::MatrixXd xtx = design.transpose() * design;
    const Eigen::VectorXd xty = design.transpose() * y;
    for (int iter = 0; iter < 30; ++iter) {
        Eigen::MatrixXd a = xtx;
        for (int j = 0; j < n_cp; ++j) {
            const double w = 1.0 / (std::abs(beta[2 + j]) + 1e-8);
            a(2 + j, 2 + j) += config.l1_penalty * w;
        }
        const Eigen::VectorXd next = a.ldlt().solve(xty);
        if (!next.allFinite()) break;
        const double change = (next - beta).norm();
        beta = next;
        if (change < 1e-12) break;
    }

    fit.offset = beta[0];
    fit.base_rate = beta[1];
    fit.cp_deltas.assign(beta.data() + 2, beta.data() + dim);

    double rss = 0.0;
    for (int t = 0; t < n; ++t) {
        const double e = y[t] - design.row(t).dot(beta);
        rss += e * e;
    }
    fit.sigma = std::sqrt(rss / std::max(n - 2, 1));
    double abs_sum = 0.0;
    for (double delta : fit.cp_deltas) abs_sum += std::abs(delta);
    fit.cp_scale = n_cp > 0 ? abs_sum / n_cp : 0.0;
    return fit;
}

double trendcast_value(const TrendCastFit& fit, double t) {
    double value = fit.offset + fit.base_rate * t;
    for (std::size_t j = 0; j < fit.cp_times.size(); ++j) {
        value += fit.cp_deltas[j] * std::max(0.0, t - fit.cp_times[j]);
    }
    return value;
}

ForecastDistribution forecast_trendcast(const TrendCastFit& fit, const EpiWeek& origin,
                                        int max_horizon,
                                        const std::vector<double>& alphas,
                                        std::uint64_t seed,
                                        const TrendCastConfig& config) {
    const double t_end = fit.n - 1.0;
    double slope_end = fit.base_rate;
    for (double delta : fit.cp_deltas) slope_end += delta;
    const double value_end = trendcast_value(fit, t_end);

    // Future changepoints arrive at the historical frequency with
    // Laplace(0, cp_scale) slope adjustments.
    const double cp_rate =
        fit.cp_times.empty() ? 0.0
                             : static_cast<double>(fit.cp_times.size()) /
                                   std::max(config.cp_range * t_end, 1.0);

    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<std::vector<double>> samples(max_horizon);
    for (int path = 0; path < config.sim_paths; ++path) {
        double slope = slope_end;
        double level = value_end;
        for (int h = 1; h <= max_horizon; ++h) {
            if (cp_rate > 0.0 && fit.cp_scale > 0.0 && unif(rng) < cp_rate) {
                // Laplace draw by inverse CDF.
                const double u = unif(rng) - 0.5;
                slope += -fit.cp_scale * std::copysign(1.0, u) *
                         std::log(1.0 - 2.0 * std::abs(u));
            }
            level += slope;
            samples[h - 1].push_back(std::max(0.0, level + fit.sigma * noise(rng)));
        }
    }

    ForecastDistribution dist;
    dist.origin = origin;
    dist.effective_samples = config.sim_paths;
    for (int h = 1; h <= max_horizon; ++h) {
        HorizonForecast hf;
        hf.samples = std::move(samples[h - 1]);
        hf.quantiles = quantiles_from_samples(hf.samples, alphas);
        dist.horizons.push_back(std::move(hf));
    }
    return dist;
}

} // namespace wwf
