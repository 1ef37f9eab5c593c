// Acceptance gate: one PASS/FAIL line per criterion. argv[1] must be the path
// to the wwforecast CLI binary (used by the protocol and determinism checks).

#include "wwf/arima.hpp"
#include "wwf/bootstrap.hpp"
#include "wwf/ensemble.hpp"
#include "wwf/gam.hpp"
#include "wwf/slr.hpp"
#include "wwf/harness.hpp"
#include "wwf/io.hpp"
#include "wwf/scoring.hpp"
#include "wwf/subepidemic.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace wwf;

namespace {

std::string g_cli;
fs::path g_work;

CalibrationWindow window_from_values(const std::vector<double>& values) {
    CalibrationWindow win;
    EpiWeek w = epiweek_containing(parse_date("2022-01-01"));
    for (double v : values) {
        win.weeks.push_back(w);
        win.values.push_back(v);
        w = epiweek_advance(w, 1);
    }
    win.origin = win.weeks.back();
    win.w = static_cast<int>(values.size());
    return win;
}

double logistic_closed_form(double r, double k, double i0, double t) {
    return k / (1.0 + (k - i0) / i0 * std::exp(-r * t));
}

// ---- criterion 1: ODE oracle --------------------------------------------

bool ode_oracle(std::string& detail) {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> r_dist(0.05, 0.6);
    std::uniform_real_distribution<double> k_log(std::log(10.0), std::log(1e4));
    std::uniform_real_distribution<double> i0_frac(0.005, 0.1);

    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        SubEpidemicParams params;
        params.n = 1;
        params.r = {r_dist(rng)};
        params.p = {1.0};
        params.k0 = {std::exp(k_log(rng))};
        params.i0 = i0_frac(rng) * params.k0[0];
        const Trajectory traj = integrate(params, 20, 8);
        for (std::size_t s = 0; s < traj.times.size(); ++s) {
            const double exact = logistic_closed_form(params.r[0], params.k0[0],
                                                      params.i0, traj.times[s]);
            worst = std::max(worst, std::abs(traj.c_tot[s] - exact) / exact);
        }
    }

    // Fourth-order convergence on a stiffer case where truncation error
    // dominates floating-point noise.
    SubEpidemicParams hard;
    hard.n = 1;
    hard.r = {1.2};
    hard.p = {1.0};
    hard.k0 = {80.0};
    hard.i0 = 0.5;
    auto max_err = [&](int steps) {
        const Trajectory traj = integrate(hard, 10, steps);
        double e = 0.0;
        for (std::size_t s = 0; s < traj.times.size(); ++s) {
            const double exact =
                logistic_closed_form(1.2, 80.0, 0.5, traj.times[s]);
            e = std::max(e, std::abs(traj.c_tot[s] - exact));
        }
        return e;
    };
    const double ratio1 = max_err(4) / max_err(8);
    const double ratio2 = max_err(8) / max_err(16);

    std::ostringstream out;
    out << "max rel err " << worst << ", halving ratios " << ratio1 << ", " << ratio2;
    detail = out.str();
    return worst < 1e-6 && ratio1 >= 12.0 && ratio1 <= 20.0 && ratio2 >= 12.0 &&
           ratio2 <= 20.0;
}

// ---- criterion 2: AICc exactness ----------------------------------------

bool aicc_exact(std::string& detail) {
    const double base = aicc(1.0, 4, 10);
    if (std::abs(base - 16.0) > 1e-12) {
        detail = "aicc(1,4,10) = " + std::to_string(base);
        return false;
    }
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> sse_dist(1e-8, 1e6);
    for (int trial = 0; trial < 1000; ++trial) {
        const double sse = sse_dist(rng);
        const int m = 1 + static_cast<int>(rng() % 7);
        const int n_d = m + 2 + static_cast<int>(rng() % 60);
        const double direct = n_d * std::log(sse) + 2.0 * m +
                              2.0 * m * (m + 1.0) / (n_d - m - 1.0);
        if (std::abs(aicc(sse, m, n_d) - direct) >
            1e-12 * std::max(1.0, std::abs(direct))) {
            detail = "property mismatch at trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "exact value and 1000 property trials";
    return true;
}

// ---- criterion 3: parameter recovery -------------------------------------

bool parameter_recovery(std::string& detail) {
    SubEpidemicParams truth;
    truth.n = 1;
    truth.r = {0.8};
    truth.p = {0.9};
    truth.k0 = {50.0};
    truth.i0 = 1.0;
    const std::vector<double> signal = fit_signal(integrate(truth, 9, 64));
    const double sigma = 0.05 * *std::max_element(signal.begin(), signal.end());

    // The r and K0 estimates are strongly collinear in a 10-point window, so
    // individual replicates scatter widely while the median estimate across
    // replicates pins the truth: score the relative error of the median
    // estimate for each parameter.
    std::vector<double> r_hat, k_hat;
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng = make_rng(hash_combine(2000, static_cast<std::uint64_t>(rep)));
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> values(10);
        for (int t = 0; t < 10; ++t) {
            values[t] = std::max(0.0, signal[t] + sigma * noise(rng));
        }
        const CalibrationWindow window = window_from_values(values);
        try {
            const SubEpidemicFit fit =
                fit_nls(window, 1, std::nullopt, 30,
                        hash_combine(3000, static_cast<std::uint64_t>(rep)));
            r_hat.push_back(fit.params.r[0]);
            k_hat.push_back(fit.params.k0[0]);
        } catch (const std::exception&) {
            r_hat.push_back(0.0);
            k_hat.push_back(0.0);
        }
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    const double r_err = std::abs(median(r_hat) - 0.8) / 0.8;
    const double k_err = std::abs(median(k_hat) - 50.0) / 50.0;
    std::ostringstream out;
    out << "median-estimate rel err: r " << r_err << ", K0 " << k_err;
    detail = out.str();
    return r_err < 0.15 && k_err < 0.15;
}

// ---- criterion 4: model-order selection ----------------------------------

bool order_selection(std::string& detail) {
    // Dominant first wave with a late shoulder, then a smaller second wave.
    // The activation threshold is driven to a fixed point of the candidate
    // grid so that the n=2 family can represent the truth exactly with one of
    // its own candidate thresholds; the second wave activates around week 4.
    SubEpidemicParams truth;
    truth.n = 2;
    truth.r = {2.0, 1.5};
    truth.p = {0.9, 0.9};
    truth.k0 = {10.0, 4.0};
    truth.c_thr = 8.0;
    truth.i0 = 0.5;
    for (int it = 0; it < 4; ++it) {
        const std::vector<double> sig = fit_signal(integrate(truth, 9, 8));
        const std::vector<double> grid =
            candidate_thresholds(window_from_values(sig), 3);
        if (grid.empty()) break;
        truth.c_thr = grid.front();
    }
    const std::vector<double> signal = fit_signal(integrate(truth, 9, 8));
    const double sigma = 0.002 * *std::max_element(signal.begin(), signal.end());

    int picked_two = 0;
    FitConfig config;
    config.starts = 30;
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng = make_rng(hash_combine(4000, static_cast<std::uint64_t>(rep)));
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> values(10);
        for (int t = 0; t < 10; ++t) {
            values[t] = std::max(0.0, signal[t] + sigma * noise(rng));
        }
        config.seed = hash_combine(5000, static_cast<std::uint64_t>(rep));
        try {
            const std::vector<SubEpidemicFit> ranked =
                rank_candidates(window_from_values(values), config);
            if (!ranked.empty() && ranked.front().params.n == 2) ++picked_two;
        } catch (const std::exception&) {
        }
    }
    detail = "n=2 ranked first in " + std::to_string(picked_two) + "/100";
    return picked_two >= 80;
}

// ---- criterion 5: bootstrap calibration ----------------------------------

bool bootstrap_calibration(std::string& detail) {
    SubEpidemicParams truth;
    truth.n = 1;
    truth.r = {0.8};
    truth.p = {0.9};
    truth.k0 = {50.0};
    truth.i0 = 1.0;
    const std::vector<double> signal = fit_signal(integrate(truth, 10, 64));
    const double sigma = 0.05 * *std::max_element(signal.begin(), signal.end() - 1);

    int covered = 0, usable = 0;
    for (int rep = 0; rep < 200; ++rep) {
        Rng rng = make_rng(hash_combine(6000, static_cast<std::uint64_t>(rep)));
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> values(10);
        for (int t = 0; t < 10; ++t) {
            values[t] = std::max(0.0, signal[t] + sigma * noise(rng));
        }
        const double y_next = std::max(0.0, signal[10] + sigma * noise(rng));
        try {
            const CalibrationWindow window = window_from_values(values);
            const SubEpidemicFit fit =
                fit_nls(window, 1, std::nullopt, 30,
                        hash_combine(7000, static_cast<std::uint64_t>(rep)));
            BootstrapConfig config;
            config.B = 300;
            config.refit_starts = 3;
            config.seed = hash_combine(8000, static_cast<std::uint64_t>(rep));
            const ForecastDistribution dist =
                bootstrap_forecast(fit, window, 1, config, default_alphas());
            const IntervalBound* b = dist.horizons[0].quantiles.find_alpha(0.05);
            if (b == nullptr) continue;
            ++usable;
            if (y_next > b->lower && y_next < b->upper) ++covered;
        } catch (const std::exception&) {
        }
    }
    const double pct = usable > 0 ? 100.0 * covered / usable : 0.0;
    std::ostringstream out;
    out << "coverage " << pct << "% over " << usable << " usable replicates";
    detail = out.str();
    return usable >= 180 && pct >= 88.0 && pct <= 99.0;
}

// ---- criterion 6: WIS suite ----------------------------------------------

bool wis_suite(std::string& detail) {
    QuantileForecast bare;
    bare.median = 3.0;
    if (std::abs(wis(bare, 5.0, {}) - 2.0) > 1e-15) {
        detail = "K=0 reduction failed";
        return false;
    }
    QuantileForecast one;
    one.median = 5.0;
    one.intervals.push_back({0.5, 4.0, 6.0});
    if (std::abs(wis(one, 5.0, {0.5}) - 1.0 / 3.0) > 1e-12) {
        detail = "K=1 hand case failed";
        return false;
    }
    QuantileForecast point;
    point.median = 2.5;
    for (double a : default_alphas()) point.intervals.push_back({a, 2.5, 2.5});
    if (wis(point, 2.5, default_alphas()) != 0.0) {
        detail = "point-mass forecast does not score 0";
        return false;
    }
    std::mt19937_64 rng(1006);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double y = 10.0 * unif(rng);
        const double lower = y - 5.0 * unif(rng) - 0.01;
        const double upper = y + 5.0 * unif(rng) + 0.01;
        const double widen = 3.0 * unif(rng);
        const double alpha = 0.02 + 0.9 * unif(rng);
        QuantileForecast narrow, wide;
        narrow.median = wide.median = y + (unif(rng) - 0.5);
        narrow.intervals.push_back({alpha, lower, upper});
        wide.intervals.push_back({alpha, lower - widen, upper + widen});
        if (wis(wide, y, {alpha}) < wis(narrow, y, {alpha}) - 1e-12) {
            detail = "monotonicity violated at trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "reduction, hand case, point mass, 1000 monotonicity trials";
    return true;
}

// ---- criterion 7: Akaike weights ------------------------------------------

bool akaike_suite(std::string& detail) {
    const std::vector<double> uniform = akaike_weights({50.0, 50.0, 50.0, 50.0});
    for (double w : uniform) {
        if (std::abs(w - 0.25) > 1e-12) {
            detail = "uniform case failed";
            return false;
        }
    }
    const std::vector<double> pair = akaike_weights({10.0, 12.0});
    if (std::abs(pair[0] - 0.7311) > 1e-4 || std::abs(pair[1] - 0.2689) > 1e-4) {
        detail = "delta=2 case failed";
        return false;
    }
    std::mt19937_64 rng(1007);
    std::uniform_real_distribution<double> unif(-100.0, 700.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> aiccs(1 + trial % 6);
        for (double& a : aiccs) a = unif(rng);
        const std::vector<double> w = akaike_weights(aiccs);
        double total = 0.0;
        for (double wi : w) total += wi;
        if (std::abs(total - 1.0) > 1e-12) {
            detail = "normalization failed at trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "uniform, delta=2, and 1000 normalization trials";
    return true;
}

// ---- criterion 8: ensemble mixture law ------------------------------------

ForecastDistribution member_from_samples(std::vector<double> samples) {
    ForecastDistribution dist;
    dist.origin = epiweek_containing(parse_date("2022-03-05"));
    dist.effective_samples = static_cast<int>(samples.size());
    HorizonForecast hf;
    hf.quantiles = quantiles_from_samples(samples, default_alphas());
    hf.samples = std::move(samples);
    dist.horizons.push_back(std::move(hf));
    return dist;
}

bool mixture_law(std::string& detail) {
    // Uniform mixture of point masses at 0 and 10; n_mix = 10 * 10^4 = 10^5.
    const ForecastDistribution lo = member_from_samples(std::vector<double>(10000, 0.0));
    const ForecastDistribution hi = member_from_samples(std::vector<double>(10000, 10.0));
    const ForecastDistribution mix =
        combine({&lo, &hi}, {0.5, 0.5}, 1008, default_alphas());
    const std::vector<double>& samples = mix.horizons[0].samples;
    const double n_mix = static_cast<double>(samples.size());
    const double frac_high =
        std::count(samples.begin(), samples.end(), 10.0) / n_mix;
    if (n_mix != 100000.0 || std::abs(frac_high - 0.5) > 0.01) {
        std::ostringstream out;
        out << "P(10) = " << frac_high << " over " << n_mix << " draws";
        detail = out.str();
        return false;
    }

    // Degenerate weights reproduce the selected member's quantiles. The mass
    // boundary (62% zeros) is kept away from every tested quantile level so
    // resampling noise cannot flip a quantile across the atom gap.
    std::vector<double> two_point(10000, 0.0);
    std::fill(two_point.begin() + 6200, two_point.end(), 10.0);
    const ForecastDistribution m1 = member_from_samples(two_point);
    const ForecastDistribution m2 = member_from_samples(std::vector<double>(10000, 5.0));
    const ForecastDistribution only1 =
        combine({&m1, &m2}, {1.0, 0.0}, 1009, default_alphas());
    const double tol = 10.0 * 2.0 / n_mix;
    auto close = [&](double a, double b) { return std::abs(a - b) <= tol; };
    const QuantileForecast& want = m1.horizons[0].quantiles;
    const QuantileForecast& got = only1.horizons[0].quantiles;
    bool ok = close(want.median, got.median);
    for (std::size_t i = 0; i < want.intervals.size() && ok; ++i) {
        ok = close(want.intervals[i].lower, got.intervals[i].lower) &&
             close(want.intervals[i].upper, got.intervals[i].upper);
    }
    std::ostringstream out;
    out << "P(10) = " << frac_high << "; degenerate-weight quantiles "
        << (ok ? "match" : "differ");
    detail = out.str();
    return ok;
}

// ---- criterion 9: baseline identities --------------------------------------

bool baseline_identities(std::string& detail) {
    // Noiseless-line SLR exactness.
    std::vector<double> line(10);
    for (int t = 0; t < 10; ++t) line[t] = 2.0 + 0.5 * t;
    const CalibrationWindow line_window = window_from_values(line);
    const SlrFit slr = fit_slr(line_window);
    for (int h = 1; h <= 4; ++h) {
        if (std::abs(slr_point(slr, h) - (2.0 + 0.5 * (9 + h))) > 1e-9) {
            detail = "SLR line exactness failed";
            return false;
        }
    }

    // GAM high-penalty limit equals SLR point forecasts.
    std::vector<double> bumpy = line;
    bumpy[2] += 0.6;
    bumpy[7] -= 0.4;
    const CalibrationWindow bumpy_window = window_from_values(bumpy);
    const GamFit gam = fit_gam(bumpy_window, -1, 1e12);
    const SlrFit slr_bumpy = fit_slr(bumpy_window);
    for (int h = 1; h <= 4; ++h) {
        if (std::abs(gam_point(gam, h) - slr_point(slr_bumpy, h)) > 1e-6) {
            detail = "GAM high-lambda limit failed at h=" + std::to_string(h);
            return false;
        }
    }

    // ARIMA(0,1,0) forecasts flat at the last observation.
    ArimaFit rw;
    rw.order = {0, 1, 0};
    rw.sigma = 0.3;
    rw.window = {1.0, 2.0, 1.5, 2.6};
    for (double p : arima_point_forecasts(rw, 4)) {
        if (std::abs(p - 2.6) > 1e-12) {
            detail = "ARIMA(0,1,0) flat identity failed";
            return false;
        }
    }

    // White-noise majority selection of (0,0,0).
    std::mt19937_64 rng(1009);
    std::normal_distribution<double> noise(5.0, 1.0);
    int white = 0;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> values(60);
        for (double& v : values) v = std::max(0.0, noise(rng));
        const ArimaFit fit = fit_arima(window_from_values(values));
        if (fit.order.p == 0 && fit.order.d == 0 && fit.order.q == 0) ++white;
    }
    detail = "identities hold; white noise picked (0,0,0) in " +
             std::to_string(white) + "/200";
    return white > 100;
}

// ---- criteria 10 & 11: protocol structure and determinism ------------------

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (first) {
            t.header = fields;
            first = false;
        } else {
            t.rows.push_back(fields);
        }
    }
    return t;
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return fa && fb && sa.str() == sb.str();
}

bool protocol_structure(std::string& detail) {
    const fs::path data = g_work / "synthetic.csv";
    write_synthetic_dataset(data, parse_date("2022-01-01"), parse_date("2024-09-14"),
                            424242);
    const fs::path out = g_work / "run1";
    if (run_cli("backtest --input " + data.string() + " --output " + out.string() +
                " --seed 20240914 --bootstrap 50") != 0) {
        detail = "backtest run failed";
        return false;
    }

    // 133 origins per region, 11 models, 4 horizons.
    const Table forecasts = read_csv(out / "forecasts.csv");
    std::map<std::string, std::set<std::string>> origins_by_region;
    std::set<std::string> models;
    std::set<std::string> horizons;
    for (const auto& row : forecasts.rows) {
        models.insert(row[0]);
        origins_by_region[row[1]].insert(row[2]);
        horizons.insert(row[4]);
    }
    if (origins_by_region.size() != 5) {
        detail = "expected 5 regions, got " + std::to_string(origins_by_region.size());
        return false;
    }
    for (const auto& [region, origins] : origins_by_region) {
        if (origins.size() != 133 || *origins.begin() != "2022-03-05" ||
            *origins.rbegin() != "2024-09-14") {
            detail = region + " has " + std::to_string(origins.size()) + " origins";
            return false;
        }
    }
    if (models.size() != 11 || horizons.size() != 4) {
        detail = "model/horizon counts off: " + std::to_string(models.size()) + "/" +
                 std::to_string(horizons.size());
        return false;
    }
    if (forecasts.rows.size() != 11ul * 5 * 133 * 4) {
        detail = "forecast row count " + std::to_string(forecasts.rows.size());
        return false;
    }

    // Summary covers 11 models x 5 regions x 4 horizons.
    const Table summary = read_csv(out / "summary.csv");
    if (summary.rows.size() != 220) {
        detail = "summary has " + std::to_string(summary.rows.size()) + " rows";
        return false;
    }

    // SLR skill rows are exactly zero in every region.
    for (const std::string& region :
         {"National", "West", "Midwest", "Northeast", "South"}) {
        const Table skill = read_csv(out / ("skill_" + region + ".csv"));
        int slr_rows = 0;
        for (const auto& row : skill.rows) {
            if (row[0] != "SLR") continue;
            ++slr_rows;
            for (int c = 2; c <= 4; ++c) {
                if (std::stod(row[c]) != 0.0) {
                    detail = "nonzero SLR skill in " + region;
                    return false;
                }
            }
        }
        if (slr_rows != 4) {
            detail = "missing SLR skill rows in " + region;
            return false;
        }
    }

    // Leakage freedom: re-run three origins on data truncated at the origin and
    // compare against the stored full-run forecasts bit for bit.
    const std::vector<WvalSeries> series = ingest(data);
    const WvalSeries* national = nullptr;
    for (const WvalSeries& s : series) {
        if (s.region == "National") national = &s;
    }
    HarnessConfig config;
    config.bootstrap.B = 50;
    config.master_seed = 20240914;
    config.threads = 1;
    for (const std::string& origin_str : {"2022-06-04", "2023-05-06", "2024-09-14"}) {
        const EpiWeek origin = epiweek_containing(parse_date(origin_str));
        WvalSeries truncated = *national;
        const auto it =
            std::find(truncated.weeks.begin(), truncated.weeks.end(), origin);
        const auto keep = static_cast<std::size_t>(it - truncated.weeks.begin()) + 1;
        truncated.weeks.resize(keep);
        truncated.values.resize(keep);
        const OriginResult redo = forecast_origin(truncated, origin, config);
        std::map<std::pair<std::string, int>, double> stored;
        for (const auto& row : forecasts.rows) {
            if (row[1] == "National" && row[2] == origin_str) {
                stored[{row[0], std::stoi(row[4])}] = std::stod(row[5]);
            }
        }
        if (stored.size() != 44 || redo.forecasts.size() != 44) {
            detail = "spot-check row count off at " + origin_str;
            return false;
        }
        for (const ForecastRow& r : redo.forecasts) {
            const auto found = stored.find({r.model, r.horizon});
            if (found == stored.end() || found->second != r.quantiles.median) {
                detail = "leakage check mismatch: " + r.model + " h" +
                         std::to_string(r.horizon) + " at " + origin_str;
                return false;
            }
        }
    }

    detail = "133 origins x 5 regions, 220 summary cells, zero SLR skill, 3 "
             "leakage spot-checks clean";
    return true;
}

bool determinism(std::string& detail) {
    const fs::path data = g_work / "synthetic.csv";
    const fs::path out1 = g_work / "run1";
    const fs::path out2 = g_work / "run2";
    if (!fs::exists(out1 / "summary.csv")) {
        detail = "first run missing (criterion 10 must run first)";
        return false;
    }
    if (run_cli("backtest --input " + data.string() + " --output " + out2.string() +
                " --seed 20240914 --bootstrap 50") != 0) {
        detail = "second backtest run failed";
        return false;
    }
    const bool summary_ok = same_bytes(out1 / "summary.csv", out2 / "summary.csv");
    const bool forecasts_ok = same_bytes(out1 / "forecasts.csv", out2 / "forecasts.csv");
    detail = std::string("summary.csv ") + (summary_ok ? "identical" : "differs") +
             ", forecasts.csv " + (forecasts_ok ? "identical" : "differs");
    return summary_ok && forecasts_ok;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-wwforecast>\n");
        return 2;
    }
    g_cli = argv[1];
    g_work = fs::temp_directory_path() /
             ("wwf_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(g_work);

    struct Criterion {
        int number;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "ODE oracle", ode_oracle},
        {2, "AICc exactness", aicc_exact},
        {3, "parameter recovery", parameter_recovery},
        {4, "model-order selection", order_selection},
        {5, "bootstrap calibration", bootstrap_calibration},
        {6, "WIS suite", wis_suite},
        {7, "Akaike weights", akaike_suite},
        {8, "ensemble mixture law", mixture_law},
        {9, "baseline identities", baseline_identities},
        {10, "protocol structure", protocol_structure},
        {11, "determinism", determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("%s criterion %2d (%s): %s [%.1fs]\n", ok ? "PASS" : "FAIL",
                    c.number, c.name, detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }

    std::error_code ec;
    fs::remove_all(g_work, ec);
    return failures == 0 ? 0 : 1;
}
