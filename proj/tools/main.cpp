#include "wwf/error.hpp"
#include "wwf/harness.hpp"
#include "wwf/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string now_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> parse_model_list(const std::string& csv) {
    std::vector<std::string> models;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto& known = wwf::all_model_names();
        if (std::find(known.begin(), known.end(), item) == known.end()) {
            std::string valid;
            for (const std::string& m : known) valid += (valid.empty() ? "" : ",") + m;
            throw wwf::Error(wwf::ErrorCategory::usage,
                             "unknown model '" + item + "' (valid: " + valid + ")");
        }
        models.push_back(item);
    }
    if (models.empty()) {
        throw wwf::Error(wwf::ErrorCategory::usage, "empty model list");
    }
    return models;
}

std::string config_echo(const wwf::HarnessConfig& cfg) {
    std::ostringstream out;
    out << "window=" << cfg.window_len << ";horizons=" << cfg.max_horizon
        << ";bootstrap=" << cfg.bootstrap.B << ";starts=" << cfg.multistarts
        << ";refit_starts=" << cfg.bootstrap.refit_starts << ";seed=" << cfg.master_seed
        << ";steps_per_week=" << cfg.steps_per_week;
    if (cfg.origin_start) out << ";origin_start=" << wwf::format_date(*cfg.origin_start);
    if (cfg.origin_end) out << ";origin_end=" << wwf::format_date(*cfg.origin_end);
    out << ";models=";
    for (std::size_t i = 0; i < cfg.models.size(); ++i) {
        out << (i ? "|" : "") << cfg.models[i];
    }
    return out.str();
}

struct CommonOpts {
    std::string input;
    int window = 10;
    int horizons = 4;
    int bootstrap = 300;
    int starts = 30;
    int refit_starts = 3;
    std::uint64_t seed = 0;
    std::string models;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--input", opts.input, "input CSV")->required();
    cmd->add_option("--window", opts.window, "calibration window length (weeks)");
    cmd->add_option("--horizons", opts.horizons, "max forecast horizon (weeks)");
    cmd->add_option("--bootstrap", opts.bootstrap, "bootstrap realizations");
    cmd->add_option("--starts", opts.starts, "multistart count for model fitting");
    cmd->add_option("--refit-starts", opts.refit_starts, "multistarts per bootstrap refit");
    cmd->add_option("--seed", opts.seed, "master RNG seed")->required();
    cmd->add_option("--models", opts.models, "comma-separated model subset");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = auto)");
}

wwf::HarnessConfig make_config(const CommonOpts& opts) {
    if (opts.window < 5) {
        throw wwf::Error(wwf::ErrorCategory::usage, "--window must be at least 5");
    }
    if (opts.horizons < 1 || opts.bootstrap < 1 || opts.starts < 1 ||
        opts.refit_starts < 1) {
        throw wwf::Error(wwf::ErrorCategory::usage,
                         "--horizons/--bootstrap/--starts/--refit-starts must be positive");
    }
    wwf::HarnessConfig cfg;
    cfg.window_len = opts.window;
    cfg.max_horizon = opts.horizons;
    cfg.bootstrap.B = opts.bootstrap;
    cfg.bootstrap.refit_starts = opts.refit_starts;
    cfg.multistarts = opts.starts;
    cfg.master_seed = opts.seed;
    cfg.threads = opts.threads;
    if (!opts.models.empty()) cfg.models = parse_model_list(opts.models);
    return cfg;
}

int run_ingest_check(const std::string& input) {
    const std::vector<wwf::WvalSeries> series = wwf::ingest(input);
    std::printf("%-12s %6s  %-10s  %-10s  %10s  %10s\n", "region", "weeks", "first",
                "last", "min", "max");
    for (const wwf::WvalSeries& s : series) {
        const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
        std::printf("%-12s %6zu  %s  %s  %10.4f  %10.4f\n", s.region.c_str(), s.size(),
                    wwf::format_date(s.weeks.front().end_date).c_str(),
                    wwf::format_date(s.weeks.back().end_date).c_str(), *lo, *hi);
    }
    std::printf("ok: %zu region(s), checksum %s\n", series.size(),
                wwf::file_checksum(input).c_str());
    return 0;
}

int run_forecast(const CommonOpts& opts, const std::string& origin_str,
                 const std::string& region_filter) {
    wwf::HarnessConfig cfg = make_config(opts);
    const std::vector<wwf::WvalSeries> series = wwf::ingest(opts.input);
    const wwf::EpiWeek origin = wwf::epiweek_containing(wwf::parse_date(origin_str));

    bool any = false;
    std::printf("%-10s %-12s  %-10s  %-10s  h  %12s  %12s  %12s\n", "model", "region",
                "origin", "target", "median", "lower95", "upper95");
    for (const wwf::WvalSeries& s : series) {
        if (!region_filter.empty() && s.region != region_filter) continue;
        any = true;
        const wwf::OriginResult result = wwf::forecast_origin(s, origin, cfg);
        for (const wwf::ForecastRow& r : result.forecasts) {
            const wwf::IntervalBound* b = r.quantiles.find_alpha(0.05);
            std::printf("%-10s %-12s  %s  %s  %d  %12.5f  %12.5f  %12.5f\n",
                        r.model.c_str(), r.region.c_str(),
                        wwf::format_date(r.origin.end_date).c_str(),
                        wwf::format_date(r.target.end_date).c_str(), r.horizon,
                        r.quantiles.median, b ? b->lower : 0.0, b ? b->upper : 0.0);
        }
        for (const wwf::FailureRecord& f : result.failures) {
            std::fprintf(stderr, "warning: %s/%s failed: %s\n", f.model.c_str(),
                         f.region.c_str(), f.message.c_str());
        }
    }
    if (!any) {
        throw wwf::Error(wwf::ErrorCategory::usage,
                         "region '" + region_filter + "' not present in input");
    }
    return 0;
}

int run_backtest(const CommonOpts& opts, const std::string& output,
                 const std::string& origin_start, const std::string& origin_end) {
    wwf::HarnessConfig cfg = make_config(opts);
    if (!origin_start.empty()) cfg.origin_start = wwf::parse_date(origin_start);
    if (!origin_end.empty()) cfg.origin_end = wwf::parse_date(origin_end);

    const std::vector<wwf::WvalSeries> series = wwf::ingest(opts.input);
    const wwf::RunArtifact artifact = wwf::run_protocol(series, cfg);

    wwf::ManifestInfo info;
    info.input_path = opts.input;
    info.input_checksum = wwf::file_checksum(opts.input);
    info.config_echo = config_echo(cfg);
    info.timestamp = now_utc();
    wwf::emit_reports(artifact, output, info);

    std::printf("backtest complete: %zu forecast rows, %zu scored rows, %zu failures\n",
                artifact.forecasts.size(), artifact.scores.size(),
                artifact.failures.size());
    std::printf("reports written to %s\n", output.c_str());
    return 0;
}

int run_report(const std::string& artifact_dir, const std::string& output) {
    const wwf::RunArtifact artifact = wwf::load_artifact(artifact_dir);
    wwf::ManifestInfo info;
    info.input_path = artifact_dir;
    info.input_checksum = wwf::file_checksum(
        std::filesystem::path(artifact_dir) / "distributions.csv");
    info.config_echo = "source=stored_artifact";
    info.timestamp = now_utc();
    wwf::emit_reports(artifact, output, info);
    std::printf("reports rebuilt from %s into %s\n", artifact_dir.c_str(),
                output.c_str());
    return 0;
}

int run_simulate(const std::string& out, const std::string& start,
                 const std::string& end, std::uint64_t seed) {
    wwf::write_synthetic_dataset(out, wwf::parse_date(start), wwf::parse_date(end), seed);
    std::printf("synthetic dataset written to %s (checksum %s)\n", out.c_str(),
                wwf::file_checksum(out).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wastewater viral activity forecasting and retrospective evaluation"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string ingest_input;
    CLI::App* ingest = app.add_subcommand("ingest-check", "validate an input CSV");
    ingest->add_option("input", ingest_input, "input CSV")->required();

    CommonOpts fc_opts;
    std::string fc_origin, fc_region;
    CLI::App* forecast = app.add_subcommand("forecast", "forecast from a single origin");
    add_common(forecast, fc_opts);
    forecast->add_option("--origin", fc_origin, "forecast origin date (YYYY-MM-DD)")
        ->required();
    forecast->add_option("--region", fc_region, "restrict to one region");

    CommonOpts bt_opts;
    std::string bt_output, bt_origin_start, bt_origin_end;
    CLI::App* backtest =
        app.add_subcommand("backtest", "rolling-origin retrospective evaluation");
    add_common(backtest, bt_opts);
    backtest->add_option("--output", bt_output, "report directory")->required();
    backtest->add_option("--origin-start", bt_origin_start, "first origin (YYYY-MM-DD)");
    backtest->add_option("--origin-end", bt_origin_end, "last origin (YYYY-MM-DD)");

    std::string rp_artifact, rp_output;
    CLI::App* report = app.add_subcommand("report", "rebuild reports from a stored run");
    report->add_option("--artifact", rp_artifact, "directory with a previous run")
        ->required();
    report->add_option("--output", rp_output, "report directory")->required();

    std::string sim_out, sim_start = "2022-01-01", sim_end = "2024-09-14";
    std::uint64_t sim_seed = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
    simulate->add_option("--out", sim_out, "output CSV")->required();
    simulate->add_option("--start", sim_start, "first week (YYYY-MM-DD)");
    simulate->add_option("--end", sim_end, "last week (YYYY-MM-DD)");
    simulate->add_option("--seed", sim_seed, "RNG seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ingest) return run_ingest_check(ingest_input);
        if (*forecast) return run_forecast(fc_opts, fc_origin, fc_region);
        if (*backtest) return run_backtest(bt_opts, bt_output, bt_origin_start, bt_origin_end);
        if (*report) return run_report(rp_artifact, rp_output);
        if (*simulate) return run_simulate(sim_out, sim_start, sim_end, sim_seed);
    } catch (const wwf::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
