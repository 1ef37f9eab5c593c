#pragma once

#include "wwf/bootstrap.hpp"
#include "wwf/forecast.hpp"
#include "wwf/scoring.hpp"
#include "wwf/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wwf {

// The 11 evaluated models: three ranked sub-epidemic fits, four ensembles,
// and four statistical baselines.
const std::vector<std::string>& all_model_names();

struct HarnessConfig {
    int window_len = 10;
    int max_horizon = 4;
    std::optional<Date> origin_start;
    std::optional<Date> origin_end;
    BootstrapConfig bootstrap;
    int multistarts = 30;
    std::vector<std::string> models = all_model_names();
    std::uint64_t master_seed = 0;
    std::vector<double> alphas = default_alphas();
    int steps_per_week = 8;
    int smoother_width = 3;
    int threads = 0;  // 0: SUBEPI_THREADS env var, then hardware concurrency
};

struct ForecastRow {
    std::string model;
    std::string region;
    EpiWeek origin;
    int horizon = 0;
    EpiWeek target;
    QuantileForecast quantiles;
};

struct SummaryCell {
    std::string model;
    std::string region;
    int horizon = 0;
    double mean_mae = 0.0;
    double mean_mse = 0.0;
    double mean_wis = 0.0;
    double coverage_pct = 0.0;
    int count = 0;
};

struct SkillCell {
    std::string model;
    std::string region;
    int horizon = 0;
    // Percent skill vs. SLR, 100 * (1 - mean_model / mean_slr).
    double mae_skill = 0.0;
    double mse_skill = 0.0;
    double wis_skill = 0.0;
};

struct FailureRecord {
    std::string model;
    std::string region;
    EpiWeek origin;
    std::string message;
};

struct BestCell {
    std::string region;
    int horizon = 0;
    std::string metric;  // MAE, MSE, WIS, COV95
    std::vector<std::string> models;
};

struct RunArtifact {
    std::vector<ForecastRow> forecasts;
    std::vector<ScoreRecord> scores;
    std::vector<SummaryCell> summary;
    std::vector<SkillCell> skill;
    std::vector<FailureRecord> failures;
};

// All enabled models' forecasts for a single (region, origin) pair, plus
// scores for horizons whose target observation exists in `series`.
struct OriginResult {
    std::vector<ForecastRow> forecasts;
    std::vector<ScoreRecord> scores;
    std::vector<FailureRecord> failures;
};
OriginResult forecast_origin(const WvalSeries& series, const EpiWeek& origin,
                             const HarnessConfig& config);

// Rolling-origin protocol over every region and origin.
RunArtifact run_protocol(const std::vector<WvalSeries>& series,
                         const HarnessConfig& config);

// Per-cell score means over all (model, region, horizon) combinations present
// in the inputs (cells with no scores carry count 0).
std::vector<SummaryCell> aggregate(const std::vector<ScoreRecord>& scores,
                                   const std::vector<std::string>& models,
                                   const std::vector<std::string>& regions,
                                   int max_horizon);

// Percent skill scores vs. the SLR baseline; SLR rows are exactly zero.
std::vector<SkillCell> skill_table(const std::vector<SummaryCell>& summary);

// Best model set per (region, horizon, metric); ties within 1e-9 included.
std::vector<BestCell> best_cells(const std::vector<SummaryCell>& summary);

} // namespace wwf
