#pragma once

#include "wwf/forecast.hpp"

#include <cstdint>
#include <vector>

namespace wwf {

struct EnsembleSpec {
    enum class Weighting { akaike, uniform };
    int k = 2;  // top models combined
    Weighting weighting = Weighting::akaike;
};

// w_i = exp(-(aicc_i - min)/2) / sum_j exp(-(aicc_j - min)/2).
std::vector<double> akaike_weights(const std::vector<double>& aiccs);

// Weighted mixture of member sample sets, realized by resampling
// n_mix = 10 * max member sample count draws per horizon (at least 1000).
// All members must share origin and horizon count.
ForecastDistribution combine(const std::vector<const ForecastDistribution*>& members,
                             const std::vector<double>& weights, std::uint64_t seed,
                             const std::vector<double>& alphas);

} // namespace wwf
