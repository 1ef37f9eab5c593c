#include "wwf/harness.hpp"

#include "wwf/arima.hpp"
#include "wwf/ensemble.hpp"
#include "wwf/error.hpp"
#include "wwf/gam.hpp"
#include "wwf/rng.hpp"
#include "wwf/slr.hpp"
#include "wwf/subepidemic.hpp"
#include "wwf/trendcast.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <thread>
#include <tuple>

namespace wwf {

namespace {

bool enabled(const HarnessConfig& config, const std::string& model) {
    return std::find(config.models.begin(), config.models.end(), model) !=
           config.models.end();
}

std::uint64_t origin_seed(const HarnessConfig& config, const std::string& region,
                          const std::string& scope, const EpiWeek& origin) {
    std::uint64_t seed = hash_combine(config.master_seed, region);
    seed = hash_combine(seed, scope);
    return hash_combine(seed,
                        static_cast<std::uint64_t>(origin.end_date.time_since_epoch().count()));
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SUBEPI_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void score_model(const WvalSeries& series, const std::string& model,
                 const ForecastDistribution& dist, const HarnessConfig& config,
                 OriginResult* out) {
    const EpiWeek& origin = dist.origin;
    for (int h = 1; h <= dist.max_horizon(); ++h) {
        ForecastRow row;
        row.model = model;
        row.region = series.region;
        row.origin = origin;
        row.horizon = h;
        row.target = epiweek_advance(origin, h);
        row.quantiles = dist.horizons[h - 1].quantiles;
        out->forecasts.push_back(row);

        const auto it = std::find(series.weeks.begin(), series.weeks.end(), row.target);
        if (it == series.weeks.end()) continue;  // beyond data end: forecast only
        const double y = series.values[it - series.weeks.begin()];

        ScoreRecord rec;
        rec.model = model;
        rec.region = series.region;
        rec.origin = origin;
        rec.horizon = h;
        const double median = row.quantiles.median;
        rec.mae = std::abs(y - median);
        rec.mse = (y - median) * (y - median);
        rec.wis = wis(row.quantiles, y, config.alphas);
        const IntervalBound* iv95 = row.quantiles.find_alpha(0.05);
        if (!iv95) {
            throw Error(ErrorCategory::validation,
                        "scoring requires the alpha=0.05 interval");
        }
        rec.covered95 = (iv95->lower < y && y < iv95->upper) ? 1 : 0;
        out->scores.push_back(rec);
    }
}

} // namespace

const std::vector<std::string>& all_model_names() {
    static const std::vector<std::string> names = {
        "Rank1", "Rank2", "Rank3", "EM2W",  "EM2UW", "EM3W",
        "EM3UW", "ARIMA", "GAM",   "SLR",   "TrendCast"};
    return names;
}

OriginResult forecast_origin(const WvalSeries& series, const EpiWeek& origin,
                             const HarnessConfig& config) {
    OriginResult out;
    const CalibrationWindow window = slice_window(series, origin, config.window_len);
    const int H = config.max_horizon;

    auto fail = [&](const std::string& model, const std::string& message) {
        out.failures.push_back({model, series.region, origin, message});
    };

    // Sub-epidemic pipeline, shared by the ranked and ensemble models.
    static const std::vector<std::string> subepi_models = {"Rank1", "Rank2", "Rank3",
                                                           "EM2W",  "EM2UW", "EM3W",
                                                           "EM3UW"};
    const bool any_subepi =
        std::any_of(subepi_models.begin(), subepi_models.end(),
                    [&](const std::string& m) { return enabled(config, m); });
    if (any_subepi) {
        const std::uint64_t seed = origin_seed(config, series.region, "subepi", origin);
        std::vector<SubEpidemicFit> ranked;
        try {
            FitConfig fit_config;
            fit_config.starts = config.multistarts;
            fit_config.seed = seed;
            fit_config.steps_per_week = config.steps_per_week;
            fit_config.smoother_width = config.smoother_width;
            ranked = rank_candidates(window, fit_config);
        } catch (const Error& e) {
            for (const auto& m : subepi_models) {
                if (enabled(config, m)) fail(m, e.what());
            }
        }

        std::vector<const ForecastDistribution*> member_dists;
        std::vector<double> member_aiccs;
        std::vector<ForecastDistribution> rank_dists(ranked.size());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const std::string name = "Rank" + std::to_string(i + 1);
            BootstrapConfig boot = config.bootstrap;
            boot.seed = hash_combine(seed, hash_combine(fnv1a64("boot"), i));
            boot.steps_per_week = config.steps_per_week;
            try {
                rank_dists[i] =
                    bootstrap_forecast(ranked[i], window, H, boot, config.alphas);
                member_dists.push_back(&rank_dists[i]);
                member_aiccs.push_back(ranked[i].aicc);
                if (enabled(config, name)) {
                    score_model(series, name, rank_dists[i], config, &out);
                }
            } catch (const Error& e) {
                if (enabled(config, name)) fail(name, e.what());
            }
        }
        for (std::size_t i = ranked.size(); i < 3 && !ranked.empty(); ++i) {
            const std::string name = "Rank" + std::to_string(i + 1);
            if (enabled(config, name)) fail(name, "fewer than 3 ranked fits available");
        }

        const auto build_ensemble = [&](const std::string& name, int k, bool weighted) {
            if (!enabled(config, name)) return;
            if (member_dists.empty()) {
                fail(name, "no bootstrap member distributions available");
                return;
            }
            // Availability clamp: use the j <= k best members that exist.
            const int j = std::min<int>(k, static_cast<int>(member_dists.size()));
            std::vector<const ForecastDistribution*> members(member_dists.begin(),
                                                             member_dists.begin() + j);
            std::vector<double> weights;
            if (weighted) {
                weights = akaike_weights(
                    std::vector<double>(member_aiccs.begin(), member_aiccs.begin() + j));
            } else {
                weights.assign(j, 1.0 / j);
            }
            try {
                const ForecastDistribution dist =
                    combine(members, weights,
                            hash_combine(seed, "mix:" + name), config.alphas);
                score_model(series, name, dist, config, &out);
            } catch (const Error& e) {
                fail(name, e.what());
            }
        };
        build_ensemble("EM2W", 2, true);
        build_ensemble("EM2UW", 2, false);
        build_ensemble("EM3W", 3, true);
        build_ensemble("EM3UW", 3, false);
    }

    if (enabled(config, "ARIMA")) {
        try {
            const ArimaFit fit = fit_arima(window);
            score_model(series, "ARIMA", forecast_arima(fit, origin, H, config.alphas),
                        config, &out);
        } catch (const Error& e) {
            fail("ARIMA", e.what());
        }
    }
    if (enabled(config, "GAM")) {
        try {
            const GamFit fit = fit_gam(window);
            score_model(series, "GAM", forecast_gam(fit, origin, H, config.alphas),
                        config, &out);
        } catch (const Error& e) {
            fail("GAM", e.what());
        }
    }
    if (enabled(config, "SLR")) {
        try {
            const SlrFit fit = fit_slr(window);
            score_model(series, "SLR", forecast_slr(fit, origin, H, config.alphas),
                        config, &out);
        } catch (const Error& e) {
            fail("SLR", e.what());
        }
    }
    if (enabled(config, "TrendCast")) {
        try {
            const TrendCastFit fit = fit_trendcast(window);
            score_model(series, "TrendCast",
                        forecast_trendcast(
                            fit, origin, H, config.alphas,
                            origin_seed(config, series.region, "TrendCast", origin)),
                        config, &out);
        } catch (const Error& e) {
            fail("TrendCast", e.what());
        }
    }
    return out;
}

RunArtifact run_protocol(const std::vector<WvalSeries>& series,
                         const HarnessConfig& config) {
    if (series.empty()) {
        throw Error(ErrorCategory::validation, "run_protocol: no input series");
    }
    struct Task {
        const WvalSeries* series;
        EpiWeek origin;
    };
    std::vector<Task> tasks;
    std::vector<std::string> regions;
    for (const auto& s : series) {
        s.validate();
        regions.push_back(s.region);
        for (std::size_t i = config.window_len - 1; i < s.weeks.size(); ++i) {
            const EpiWeek& origin = s.weeks[i];
            if (config.origin_start && origin.end_date < *config.origin_start) continue;
            if (config.origin_end && origin.end_date > *config.origin_end) continue;
            tasks.push_back({&s, origin});
        }
        if (config.origin_start) {
            const Date first_feasible = s.weeks[config.window_len - 1].end_date;
            if (*config.origin_start < first_feasible) {
                throw Error(ErrorCategory::insufficient_data,
                            "run_protocol: origin range starts before " +
                                format_date(first_feasible) + " for region '" +
                                s.region + "'");
            }
        }
    }

    std::vector<OriginResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const int n_threads =
        std::min<int>(resolve_threads(config.threads), static_cast<int>(tasks.size()));
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            results[i] = forecast_origin(*tasks[i].series, tasks[i].origin, config);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RunArtifact artifact;
    for (auto& res : results) {
        artifact.forecasts.insert(artifact.forecasts.end(), res.forecasts.begin(),
                                  res.forecasts.end());
        artifact.scores.insert(artifact.scores.end(), res.scores.begin(),
                               res.scores.end());
        artifact.failures.insert(artifact.failures.end(), res.failures.begin(),
                                 res.failures.end());
    }
    artifact.summary =
        aggregate(artifact.scores, config.models, regions, config.max_horizon);
    artifact.skill = skill_table(artifact.summary);
    return artifact;
}

std::vector<SummaryCell> aggregate(const std::vector<ScoreRecord>& scores,
                                   const std::vector<std::string>& models,
                                   const std::vector<std::string>& regions,
                                   int max_horizon) {
    std::map<std::tuple<std::string, std::string, int>, SummaryCell> cells;
    for (const auto& model : models) {
        for (const auto& region : regions) {
            for (int h = 1; h <= max_horizon; ++h) {
                SummaryCell cell;
                cell.model = model;
                cell.region = region;
                cell.horizon = h;
                cells[{model, region, h}] = cell;
            }
        }
    }
    for (const auto& rec : scores) {
        const auto it = cells.find({rec.model, rec.region, rec.horizon});
        if (it == cells.end()) continue;
        SummaryCell& cell = it->second;
        cell.mean_mae += rec.mae;
        cell.mean_mse += rec.mse;
        cell.mean_wis += rec.wis;
        cell.coverage_pct += rec.covered95;
        cell.count += 1;
    }
    std::vector<SummaryCell> out;
    for (auto& [key, cell] : cells) {
        if (cell.count > 0) {
            cell.mean_mae /= cell.count;
            cell.mean_mse /= cell.count;
            cell.mean_wis /= cell.count;
            cell.coverage_pct = 100.0 * cell.coverage_pct / cell.count;
        }
        out.push_back(cell);
    }
    // Deterministic order: model list order, then region list order, then horizon.
    auto rank_of = [](const std::vector<std::string>& list, const std::string& v) {
        return std::find(list.begin(), list.end(), v) - list.begin();
    };
    std::sort(out.begin(), out.end(), [&](const SummaryCell& a, const SummaryCell& b) {
        const auto ka = std::make_tuple(rank_of(models, a.model), rank_of(regions, a.region),
                                        a.horizon);
        const auto kb = std::make_tuple(rank_of(models, b.model), rank_of(regions, b.region),
                                        b.horizon);
        return ka < kb;
    });
    return out;
}

std::vector<SkillCell> skill_table(const std::vector<SummaryCell>& summary) {
    std::map<std::pair<std::string, int>, const SummaryCell*> slr_cells;
    for (const auto& cell : summary) {
        if (cell.model == "SLR") slr_cells[{cell.region, cell.horizon}] = &cell;
    }
    if (slr_cells.empty()) {
        throw Error(ErrorCategory::validation,
                    "skill_table: SLR baseline missing from summary");
    }
    std::vector<SkillCell> out;
    for (const auto& cell : summary) {
        SkillCell skill;
        skill.model = cell.model;
        skill.region = cell.region;
        skill.horizon = cell.horizon;
        if (cell.model == "SLR") {
            out.push_back(skill);  // zero by construction
            continue;
        }
        const auto it = slr_cells.find({cell.region, cell.horizon});
        if (it == slr_cells.end() || it->second->count == 0 || cell.count == 0) {
            skill.mae_skill = skill.mse_skill = skill.wis_skill =
                std::numeric_limits<double>::quiet_NaN();
        } else {
            const SummaryCell& base = *it->second;
            auto pct = [](double model_mean, double slr_mean) {
                if (!(slr_mean > 0.0)) return std::numeric_limits<double>::quiet_NaN();
                return 100.0 * skill_score(model_mean, slr_mean);
            };
            skill.mae_skill = pct(cell.mean_mae, base.mean_mae);
            skill.mse_skill = pct(cell.mean_mse, base.mean_mse);
            skill.wis_skill = pct(cell.mean_wis, base.mean_wis);
        }
        out.push_back(skill);
    }
    return out;
}

std::vector<BestCell> best_cells(const std::vector<SummaryCell>& summary) {
    std::set<std::pair<std::string, int>> keys;
    for (const auto& cell : summary) keys.insert({cell.region, cell.horizon});

    std::vector<BestCell> out;
    static const std::vector<std::string> metrics = {"MAE", "MSE", "WIS", "COV95"};
    for (const auto& [region, horizon] : keys) {
        for (const auto& metric : metrics) {
            BestCell best;
            best.region = region;
            best.horizon = horizon;
            best.metric = metric;
            double best_value = std::numeric_limits<double>::infinity();
            for (const auto& cell : summary) {
                if (cell.region != region || cell.horizon != horizon || cell.count == 0) {
                    continue;
                }
                double value;
                if (metric == "MAE") value = cell.mean_mae;
                else if (metric == "MSE") value = cell.mean_mse;
                else if (metric == "WIS") value = cell.mean_wis;
                else value = std::abs(cell.coverage_pct - 95.0);
                if (value < best_value - 1e-9) {
                    best_value = value;
                    best.models = {cell.model};
                } else if (std::abs(value - best_value) <= 1e-9) {
                    best.models.push_back(cell.model);
                }
            }
            out.push_back(best);
        }
    }
    return out;
}

} // namespace wwf
