#pragma once

#include "wwf/forecast.hpp"

#include <string>
#include <vector>

namespace wwf {

// One scored (model, region, origin, horizon) forecast-observation pair.
struct ScoreRecord {
    std::string model;
    std::string region;
    EpiWeek origin;
    int horizon = 0;
    double mae = 0.0;
    double mse = 0.0;
    double wis = 0.0;
    int covered95 = 0;
};

double mae(const std::vector<double>& observed, const std::vector<double>& predicted);
double mse(const std::vector<double>& observed, const std::vector<double>& predicted);

// (u-l) + (2/alpha)(l-y) 1{y<l} + (2/alpha)(y-u) 1{y>u}.
double interval_score(double lower, double upper, double alpha, double y);

// Weighted interval score over the forecast's intervals at the given alphas.
double wis(const QuantileForecast& forecast, double y, const std::vector<double>& alphas);

struct CoverageEntry {
    double lower = 0.0;
    double upper = 0.0;
    double y = 0.0;
};

// Fraction of observations strictly inside their 95% interval.
double coverage95(const std::vector<CoverageEntry>& records);

// 1 - mean_model / mean_slr. Throws when the baseline mean is not positive.
double skill_score(double metric_mean_model, double metric_mean_slr);

} // namespace wwf
