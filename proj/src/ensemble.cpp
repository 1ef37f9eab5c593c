#include "wwf/ensemble.hpp"

#include "wwf/error.hpp"
#include "wwf/rng.hpp"

#include <algorithm>
#include <cmath>

namespace wwf {

std::vector<double> akaike_weights(const std::vector<double>& aiccs) {
    if (aiccs.empty()) {
        throw Error(ErrorCategory::validation, "akaike_weights: empty AICc list");
    }
    const double min_aicc = *std::min_element(aiccs.begin(), aiccs.end());
    std::vector<double> weights(aiccs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < aiccs.size(); ++i) {
        weights[i] = std::exp(-(aiccs[i] - min_aicc) / 2.0);
        total += weights[i];
    }
    for (double& w : weights) w /= total;
    return weights;
}

ForecastDistribution combine(const std::vector<const ForecastDistribution*>& members,
                             const std::vector<double>& weights, std::uint64_t seed,
                             const std::vector<double>& alphas) {
    if (members.empty() || members.size() != weights.size()) {
        throw Error(ErrorCategory::validation, "combine: members/weights size mismatch");
    }
    const int n_horizons = members[0]->max_horizon();
    for (const auto* m : members) {
        if (m->origin != members[0]->origin || m->max_horizon() != n_horizons) {
            throw Error(ErrorCategory::validation,
                        "combine: members disagree on origin or horizons");
        }
    }

    std::size_t max_samples = 0;
    for (const auto* m : members) {
        for (const auto& h : m->horizons) {
            max_samples = std::max(max_samples, h.samples.size());
        }
    }
    const std::size_t n_mix = std::max<std::size_t>(10 * max_samples, 1000);

    // Cumulative weights for the member draw.
    std::vector<double> cumw(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cumw[i] = acc;
    }
    cumw.back() = 1.0;

    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    ForecastDistribution out;
    out.origin = members[0]->origin;
    out.effective_samples = static_cast<int>(n_mix);
    for (int h = 0; h < n_horizons; ++h) {
        HorizonForecast hf;
        hf.samples.reserve(n_mix);
        for (std::size_t s = 0; s < n_mix; ++s) {
            const double u = unif(rng);
            std::size_t pick = 0;
            while (pick + 1 < cumw.size() && u > cumw[pick]) ++pick;
            const auto& pool = members[pick]->horizons[h].samples;
            if (pool.empty()) {
                throw Error(ErrorCategory::validation,
                            "combine: member " + std::to_string(pick + 1) +
                                " carries no samples at horizon " + std::to_string(h + 1));
            }
            const auto idx = static_cast<std::size_t>(unif(rng) * pool.size());
            hf.samples.push_back(pool[std::min(idx, pool.size() - 1)]);
        }
        hf.quantiles = quantiles_from_samples(hf.samples, alphas);
        out.horizons.push_back(std::move(hf));
    }
    return out;
}

} // namespace wwf
