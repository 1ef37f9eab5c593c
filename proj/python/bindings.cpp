#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wwf/ensemble.hpp"
#include "wwf/error.hpp"
#include "wwf/harness.hpp"
#include "wwf/io.hpp"
#include "wwf/scoring.hpp"
#include "wwf/subepidemic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace wwf;

namespace {

WvalSeries series_from(const std::string& region, const std::string& start,
                       const std::vector<double>& values) {
    WvalSeries s;
    s.region = region;
    EpiWeek w = epiweek_containing(parse_date(start));
    for (double v : values) {
        s.weeks.push_back(w);
        s.values.push_back(v);
        w = epiweek_advance(w, 1);
    }
    s.validate();
    return s;
}

HarnessConfig config_from(std::uint64_t seed, int window, int horizons, int bootstrap,
                          int starts, int refit_starts,
                          const std::optional<std::vector<std::string>>& models,
                          int threads) {
    HarnessConfig config;
    config.master_seed = seed;
    config.window_len = window;
    config.max_horizon = horizons;
    config.bootstrap.B = bootstrap;
    config.bootstrap.refit_starts = refit_starts;
    config.multistarts = starts;
    config.threads = threads;
    if (models) config.models = *models;
    return config;
}

py::dict row_to_dict(const ForecastRow& r) {
    py::dict d;
    d["model"] = r.model;
    d["region"] = r.region;
    d["origin"] = format_date(r.origin.end_date);
    d["target"] = format_date(r.target.end_date);
    d["horizon"] = r.horizon;
    d["median"] = r.quantiles.median;
    py::dict intervals;
    for (const IntervalBound& b : r.quantiles.intervals) {
        intervals[py::float_(b.alpha)] = py::make_tuple(b.lower, b.upper);
    }
    d["intervals"] = intervals;
    return d;
}

py::dict score_to_dict(const ScoreRecord& s) {
    py::dict d;
    d["model"] = s.model;
    d["region"] = s.region;
    d["origin"] = format_date(s.origin.end_date);
    d["horizon"] = s.horizon;
    d["mae"] = s.mae;
    d["mse"] = s.mse;
    d["wis"] = s.wis;
    d["covered95"] = s.covered95;
    return d;
}

py::dict summary_to_dict(const SummaryCell& c) {
    py::dict d;
    d["model"] = c.model;
    d["region"] = c.region;
    d["horizon"] = c.horizon;
    d["mean_mae"] = c.mean_mae;
    d["mean_mse"] = c.mean_mse;
    d["mean_wis"] = c.mean_wis;
    d["coverage95_pct"] = c.coverage_pct;
    d["count"] = c.count;
    return d;
}

} // namespace

PYBIND11_MODULE(_wwforecast, m) {
    m.doc() = "Wastewater viral activity forecasting engine";
    m.attr("__version__") = kVersion;
    m.attr("MODEL_NAMES") = all_model_names();

    m.def("aicc", &aicc, py::arg("sse"), py::arg("m"), py::arg("n_d"),
          "Corrected Akaike information criterion (natural log).");
    m.def("akaike_weights", &akaike_weights, py::arg("aiccs"));
    m.def("wval_from_sd", &wval_from_sd, py::arg("sd"));
    m.def("default_alphas", [] { return default_alphas(); });

    m.def(
        "epiweek_ending",
        [](const std::string& date) {
            return format_date(epiweek_containing(parse_date(date)).end_date);
        },
        py::arg("date"), "End date (Saturday) of the epiweek containing the date.");

    m.def(
        "wis",
        [](double median, const std::map<double, std::pair<double, double>>& intervals,
           double y) {
            QuantileForecast f;
            f.median = median;
            std::vector<double> alphas;
            for (const auto& [alpha, bounds] : intervals) {
                f.intervals.push_back({alpha, bounds.first, bounds.second});
                alphas.push_back(alpha);
            }
            return wis(f, y, alphas);
        },
        py::arg("median"), py::arg("intervals"), py::arg("y"),
        "Weighted interval score; intervals maps alpha -> (lower, upper).");

    m.def(
        "fit_subepidemic",
        [](const std::vector<double>& values, int n, std::optional<double> c_thr,
           int starts, std::uint64_t seed) {
            const WvalSeries s = series_from("National", "2022-01-01", values);
            const CalibrationWindow window =
                slice_window(s, s.weeks.back(), static_cast<int>(values.size()));
            const SubEpidemicFit fit = fit_nls(window, n, c_thr, starts, seed);
            py::dict d;
            d["n"] = fit.params.n;
            d["r"] = fit.params.r;
            d["p"] = fit.params.p;
            d["k0"] = fit.params.k0;
            d["c_thr"] = fit.params.c_thr;
            d["i0"] = fit.params.i0;
            d["sse"] = fit.sse;
            d["aicc"] = fit.aicc;
            return d;
        },
        py::arg("values"), py::arg("n") = 1, py::arg("c_thr") = std::nullopt,
        py::arg("starts") = 30, py::arg("seed") = 0,
        "Multistart least-squares fit of an n-sub-epidemic model to a window.");

    m.def(
        "forecast",
        [](const std::vector<double>& values, const std::string& region,
           const std::string& start, std::uint64_t seed, int window, int horizons,
           int bootstrap, int starts, int refit_starts,
           const std::optional<std::vector<std::string>>& models, int threads) {
            const WvalSeries s = series_from(region, start, values);
            const HarnessConfig config = config_from(seed, window, horizons, bootstrap,
                                                     starts, refit_starts, models,
                                                     threads);
            const OriginResult result = forecast_origin(s, s.weeks.back(), config);
            py::list rows;
            for (const ForecastRow& r : result.forecasts) rows.append(row_to_dict(r));
            return rows;
        },
        py::arg("values"), py::arg("region") = "National",
        py::arg("start") = "2022-01-01", py::arg("seed") = 0, py::arg("window") = 10,
        py::arg("horizons") = 4, py::arg("bootstrap") = 300, py::arg("starts") = 30,
        py::arg("refit_starts") = 3, py::arg("models") = std::nullopt,
        py::arg("threads") = 0,
        "All-model probabilistic forecasts from the final week of the series.");

    m.def(
        "backtest",
        [](const std::string& input, const std::string& output, std::uint64_t seed,
           int window, int horizons, int bootstrap, int starts, int refit_starts,
           const std::optional<std::vector<std::string>>& models,
           const std::optional<std::string>& origin_start,
           const std::optional<std::string>& origin_end, int threads) {
            HarnessConfig config = config_from(seed, window, horizons, bootstrap,
                                               starts, refit_starts, models, threads);
            if (origin_start) config.origin_start = parse_date(*origin_start);
            if (origin_end) config.origin_end = parse_date(*origin_end);
            const std::vector<WvalSeries> series = ingest(input);
            const RunArtifact artifact = run_protocol(series, config);
            ManifestInfo info;
            info.input_path = input;
            info.input_checksum = file_checksum(input);
            info.config_echo = "python-binding";
            emit_reports(artifact, output, info);
            py::dict d;
            py::list summary, scores;
            for (const SummaryCell& c : artifact.summary) summary.append(summary_to_dict(c));
            for (const ScoreRecord& s : artifact.scores) scores.append(score_to_dict(s));
            d["summary"] = summary;
            d["scores"] = scores;
            d["n_forecasts"] = artifact.forecasts.size();
            d["n_failures"] = artifact.failures.size();
            return d;
        },
        py::arg("input"), py::arg("output"), py::arg("seed"), py::arg("window") = 10,
        py::arg("horizons") = 4, py::arg("bootstrap") = 300, py::arg("starts") = 30,
        py::arg("refit_starts") = 3, py::arg("models") = std::nullopt,
        py::arg("origin_start") = std::nullopt, py::arg("origin_end") = std::nullopt,
        py::arg("threads") = 0,
        "Rolling-origin backtest over a CSV dataset; writes the report files.");

    m.def(
        "simulate",
        [](const std::string& out, const std::string& start, const std::string& end,
           std::uint64_t seed) {
            write_synthetic_dataset(out, parse_date(start), parse_date(end), seed);
        },
        py::arg("out"), py::arg("start") = "2022-01-01", py::arg("end") = "2024-09-14",
        py::arg("seed") = 0, "Write a synthetic five-region weekly dataset.");

    m.def(
        "ingest",
        [](const std::string& path) {
            py::list out;
            for (const WvalSeries& s : ingest(path)) {
                py::dict d;
                d["region"] = s.region;
                std::vector<std::string> weeks;
                for (const EpiWeek& w : s.weeks) weeks.push_back(format_date(w.end_date));
                d["weeks"] = weeks;
                d["values"] = s.values;
                out.append(d);
            }
            return out;
        },
        py::arg("path"), "Parse and validate an input CSV.");

    py::register_exception<Error>(m, "EngineError");
}
