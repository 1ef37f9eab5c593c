#include "wwf/io.hpp"

#include "wwf/error.hpp"
#include "wwf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace wwf {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

double parse_number(const std::string& s, const std::string& what, int row) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCategory::validation,
                    "row " + std::to_string(row) + ": bad " + what + " '" + s + "'");
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCategory::io, "cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCategory::io, "cannot write " + path.string());
    }
    return out;
}

// Region display order: census order first, then unknowns alphabetically.
std::vector<std::string> ordered_regions(const std::set<std::string>& present) {
    std::vector<std::string> out;
    for (const Region& r : census_regions()) {
        if (present.count(r.name)) out.push_back(r.name);
    }
    for (const std::string& name : present) {
        if (!is_known_region(name)) out.push_back(name);
    }
    return out;
}

std::vector<std::string> ordered_models(const std::set<std::string>& present) {
    std::vector<std::string> out;
    for (const std::string& name : all_model_names()) {
        if (present.count(name)) out.push_back(name);
    }
    for (const std::string& name : present) {
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
    return out;
}

} // namespace

std::vector<WvalSeries> ingest(const std::filesystem::path& path,
                               const IngestOptions& options) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCategory::validation, path.string() + ": empty file");
    }
    const std::vector<std::string> header = split_csv(line);
    if (header.size() != 3 || header[0] != "week_ending" || header[1] != "region" ||
        (header[2] != "wval" && header[2] != "sd_above_baseline")) {
        throw Error(ErrorCategory::validation,
                    path.string() +
                        ": expected header week_ending,region,{wval|sd_above_baseline}");
    }
    const bool sd_schema = header[2] == "sd_above_baseline";

    std::map<std::string, std::map<Date, double>> by_region;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != 3) {
            throw Error(ErrorCategory::validation,
                        "row " + std::to_string(row) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        }
        Date d;
        try {
            d = parse_date(fields[0]);
        } catch (const std::exception& e) {
            throw Error(ErrorCategory::validation,
                        "row " + std::to_string(row) + ": " + e.what());
        }
        const std::string& region = fields[1];
        if (region.empty()) {
            throw Error(ErrorCategory::validation,
                        "row " + std::to_string(row) + ": empty region");
        }
        if (!options.allow_unknown_regions && !is_known_region(region)) {
            throw Error(ErrorCategory::validation,
                        "row " + std::to_string(row) + ": unknown region '" + region + "'");
        }
        double value = parse_number(fields[2], header[2], row);
        if (!std::isfinite(value)) {
            throw Error(ErrorCategory::validation,
                        "row " + std::to_string(row) + ": non-finite value");
        }
        if (sd_schema) {
            value = wval_from_sd(value);
        } else if (value < 0.0) {
            throw Error(ErrorCategory::validation,
                        "row " + std::to_string(row) + ": negative wval");
        }
        const Date week_end = epiweek_containing(d).end_date;
        auto [it, inserted] = by_region[region].emplace(week_end, value);
        if (!inserted) {
            throw Error(ErrorCategory::validation,
                        "row " + std::to_string(row) + ": duplicate week " +
                            format_date(week_end) + " for region '" + region + "'");
        }
    }
    if (by_region.empty()) {
        throw Error(ErrorCategory::validation, path.string() + ": no data rows");
    }

    std::set<std::string> present;
    for (const auto& [name, rows] : by_region) present.insert(name);

    std::vector<WvalSeries> out;
    for (const std::string& name : ordered_regions(present)) {
        const auto& rows = by_region.at(name);
        WvalSeries s;
        s.region = name;
        Date prev{};
        bool first = true;
        for (const auto& [d, v] : rows) {
            if (!first && (d - prev).count() != 7) {
                throw Error(ErrorCategory::validation,
                            "region '" + name + "': gap between " + format_date(prev) +
                                " and " + format_date(d));
            }
            s.weeks.push_back(epiweek_containing(d));
            s.values.push_back(v);
            prev = d;
            first = false;
        }
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCategory::io, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return hex;
}

namespace {

void write_summary_csv(const std::vector<SummaryCell>& summary,
                       const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "model,region,horizon,mean_mae,mean_mse,mean_wis,coverage95_pct,count\n";
    for (const SummaryCell& c : summary) {
        out << c.model << ',' << c.region << ',' << c.horizon << ',' << fmt(c.mean_mae)
            << ',' << fmt(c.mean_mse) << ',' << fmt(c.mean_wis) << ','
            << fmt(c.coverage_pct) << ',' << c.count << '\n';
    }
}

void write_skill_csvs(const std::vector<SkillCell>& skill,
                      const std::filesystem::path& outdir) {
    std::set<std::string> regions;
    for (const SkillCell& c : skill) regions.insert(c.region);
    for (const std::string& region : regions) {
        std::ofstream out = open_output(outdir / ("skill_" + region + ".csv"));
        out << "model,horizon,mae_skill_pct,mse_skill_pct,wis_skill_pct\n";
        for (const SkillCell& c : skill) {
            if (c.region != region) continue;
            out << c.model << ',' << c.horizon << ',' << fmt(c.mae_skill) << ','
                << fmt(c.mse_skill) << ',' << fmt(c.wis_skill) << '\n';
        }
    }
}

void write_distributions_csv(const std::vector<ScoreRecord>& scores,
                             const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "model,region,origin,horizon,mae,mse,wis,covered95\n";
    for (const ScoreRecord& s : scores) {
        out << s.model << ',' << s.region << ',' << format_date(s.origin.end_date) << ','
            << s.horizon << ',' << fmt(s.mae) << ',' << fmt(s.mse) << ',' << fmt(s.wis)
            << ',' << s.covered95 << '\n';
    }
}

std::vector<double> forecast_alphas(const std::vector<ForecastRow>& forecasts) {
    if (forecasts.empty()) return default_alphas();
    std::vector<double> alphas;
    for (const IntervalBound& b : forecasts.front().quantiles.intervals) {
        alphas.push_back(b.alpha);
    }
    return alphas;
}

void write_forecasts_csv(const std::vector<ForecastRow>& forecasts,
                         const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    const std::vector<double> alphas = forecast_alphas(forecasts);
    out << "model,region,origin,target,horizon,median";
    for (double a : alphas) {
        out << ",lower_" << fmt_short(a) << ",upper_" << fmt_short(a);
    }
    out << '\n';
    for (const ForecastRow& r : forecasts) {
        out << r.model << ',' << r.region << ',' << format_date(r.origin.end_date) << ','
            << format_date(r.target.end_date) << ',' << r.horizon << ','
            << fmt(r.quantiles.median);
        for (double a : alphas) {
            const IntervalBound* b = r.quantiles.find_alpha(a);
            if (b == nullptr) {
                throw Error(ErrorCategory::validation,
                            "forecast rows carry inconsistent interval sets");
            }
            out << ',' << fmt(b->lower) << ',' << fmt(b->upper);
        }
        out << '\n';
    }
}

void write_failures_csv(const std::vector<FailureRecord>& failures,
                        const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "model,region,origin,message\n";
    for (const FailureRecord& f : failures) {
        std::string msg = f.message;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        out << f.model << ',' << f.region << ',' << format_date(f.origin.end_date) << ','
            << msg << '\n';
    }
}

struct HeatCell {
    double value = std::nan("");
    bool best = false;
};

void write_heatmap_svg(const std::string& region,
                       const std::vector<SummaryCell>& summary,
                       const std::vector<BestCell>& best, int max_horizon,
                       const std::filesystem::path& path) {
    std::vector<std::string> models;
    {
        std::set<std::string> present;
        for (const SummaryCell& c : summary) {
            if (c.region == region) present.insert(c.model);
        }
        models = ordered_models(present);
    }
    const std::vector<std::string> metrics = {"MAE", "MSE", "WIS", "COV95"};
    const int n_cols = static_cast<int>(metrics.size()) * max_horizon;
    const int n_rows = static_cast<int>(models.size());

    // cells[row][col]; columns grouped by metric, horizons within a group.
    std::vector<std::vector<HeatCell>> cells(n_rows, std::vector<HeatCell>(n_cols));
    auto col_of = [&](int metric, int horizon) { return metric * max_horizon + horizon - 1; };
    for (const SummaryCell& c : summary) {
        if (c.region != region || c.horizon < 1 || c.horizon > max_horizon) continue;
        const auto it = std::find(models.begin(), models.end(), c.model);
        if (it == models.end()) continue;
        const int row = static_cast<int>(it - models.begin());
        if (c.count > 0) {
            cells[row][col_of(0, c.horizon)].value = c.mean_mae;
            cells[row][col_of(1, c.horizon)].value = c.mean_mse;
            cells[row][col_of(2, c.horizon)].value = c.mean_wis;
            cells[row][col_of(3, c.horizon)].value = c.coverage_pct;
        }
    }
    for (const BestCell& b : best) {
        if (b.region != region) continue;
        const auto mit = std::find(metrics.begin(), metrics.end(), b.metric);
        if (mit == metrics.end() || b.horizon < 1 || b.horizon > max_horizon) continue;
        const int col = col_of(static_cast<int>(mit - metrics.begin()), b.horizon);
        for (const std::string& model : b.models) {
            const auto it = std::find(models.begin(), models.end(), model);
            if (it != models.end()) cells[it - models.begin()][col].best = true;
        }
    }

    const int cell_w = 58, cell_h = 24, left = 90, top = 56;
    const int width = left + n_cols * cell_w + 10;
    const int height = top + n_rows * cell_h + 10;

    std::ofstream out = open_output(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    out << "<text x=\"8\" y=\"16\" font-size=\"13\">" << region << "</text>\n";
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        const int x = left + static_cast<int>(m) * max_horizon * cell_w;
        out << "<text x=\"" << x + max_horizon * cell_w / 2 << "\" y=\"34\" "
            << "text-anchor=\"middle\">" << metrics[m] << "</text>\n";
        for (int h = 1; h <= max_horizon; ++h) {
            out << "<text x=\"" << x + (h - 1) * cell_w + cell_w / 2 << "\" y=\"50\" "
                << "text-anchor=\"middle\">h" << h << "</text>\n";
        }
    }
    for (int r = 0; r < n_rows; ++r) {
        out << "<text x=\"" << left - 6 << "\" y=\"" << top + r * cell_h + 16
            << "\" text-anchor=\"end\">" << models[r] << "</text>\n";
    }
    for (int c = 0; c < n_cols; ++c) {
        // Normalize within the column: low is good for error metrics, distance
        // from 95 for coverage.
        const bool is_cov = c / max_horizon == 3;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < n_rows; ++r) {
            const double v = cells[r][c].value;
            if (std::isnan(v)) continue;
            const double key = is_cov ? std::abs(v - 95.0) : v;
            lo = std::min(lo, key);
            hi = std::max(hi, key);
        }
        for (int r = 0; r < n_rows; ++r) {
            const HeatCell& cell = cells[r][c];
            const int x = left + c * cell_w;
            const int y = top + r * cell_h;
            std::string fill = "#eeeeee";
            if (!std::isnan(cell.value)) {
                const double key = is_cov ? std::abs(cell.value - 95.0) : cell.value;
                const double t = hi > lo ? (key - lo) / (hi - lo) : 0.0;
                const int red = static_cast<int>(255 * t);
                const int green = static_cast<int>(255 * (1.0 - 0.55 * t));
                char color[8];
                std::snprintf(color, sizeof(color), "#%02x%02x%02x", red, green, 140);
                fill = color;
            }
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
                << "\" height=\"" << cell_h << "\" fill=\"" << fill << "\" stroke=\""
                << (cell.best ? "#000000" : "#ffffff") << "\" stroke-width=\""
                << (cell.best ? 2 : 1) << "\"/>\n";
            if (!std::isnan(cell.value)) {
                char label[32];
                std::snprintf(label, sizeof(label), "%.2f", cell.value);
                out << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + 16
                    << "\" text-anchor=\"middle\"" << (cell.best ? " font-weight=\"bold\"" : "")
                    << ">" << label << "</text>\n";
            }
        }
    }
    out << "</svg>\n";
}

} // namespace

void emit_reports(const RunArtifact& artifact, const std::filesystem::path& outdir,
                  const ManifestInfo& manifest) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) {
        throw Error(ErrorCategory::io, "cannot create " + outdir.string());
    }

    write_summary_csv(artifact.summary, outdir / "summary.csv");
    write_skill_csvs(artifact.skill, outdir);
    write_distributions_csv(artifact.scores, outdir / "distributions.csv");
    write_forecasts_csv(artifact.forecasts, outdir / "forecasts.csv");
    if (!artifact.failures.empty()) {
        write_failures_csv(artifact.failures, outdir / "failures.csv");
    }

    int max_horizon = 0;
    std::set<std::string> regions;
    for (const SummaryCell& c : artifact.summary) {
        max_horizon = std::max(max_horizon, c.horizon);
        regions.insert(c.region);
    }
    const std::vector<BestCell> best = best_cells(artifact.summary);
    for (const std::string& region : regions) {
        write_heatmap_svg(region, artifact.summary, best, max_horizon,
                          outdir / ("heatmap_" + region + ".svg"));
    }

    std::ofstream out = open_output(outdir / "manifest.txt");
    out << "version=" << kVersion << '\n';
    out << "input=" << manifest.input_path << '\n';
    out << "input_checksum=" << manifest.input_checksum << '\n';
    out << "config=" << manifest.config_echo << '\n';
    if (!manifest.timestamp.empty()) out << "timestamp=" << manifest.timestamp << '\n';
    out << "forecast_rows=" << artifact.forecasts.size() << '\n';
    out << "score_rows=" << artifact.scores.size() << '\n';
    out << "failures=" << artifact.failures.size() << '\n';
    out.flush();
    out << "summary_checksum=" << file_checksum(outdir / "summary.csv") << '\n';
    out << "forecasts_checksum=" << file_checksum(outdir / "forecasts.csv") << '\n';
}

RunArtifact load_artifact(const std::filesystem::path& dir) {
    RunArtifact artifact;

    {
        std::ifstream in = open_input(dir / "distributions.csv");
        std::string line;
        if (!std::getline(in, line) ||
            split_csv(line) != std::vector<std::string>{"model", "region", "origin",
                                                        "horizon", "mae", "mse", "wis",
                                                        "covered95"}) {
            throw Error(ErrorCategory::validation, "distributions.csv: bad header");
        }
        int row = 1;
        while (std::getline(in, line)) {
            ++row;
            if (trim(line).empty()) continue;
            const std::vector<std::string> f = split_csv(line);
            if (f.size() != 8) {
                throw Error(ErrorCategory::validation,
                            "distributions.csv row " + std::to_string(row) +
                                ": expected 8 fields");
            }
            ScoreRecord s;
            s.model = f[0];
            s.region = f[1];
            s.origin = epiweek_containing(parse_date(f[2]));
            s.horizon = static_cast<int>(parse_number(f[3], "horizon", row));
            s.mae = parse_number(f[4], "mae", row);
            s.mse = parse_number(f[5], "mse", row);
            s.wis = parse_number(f[6], "wis", row);
            s.covered95 = static_cast<int>(parse_number(f[7], "covered95", row));
            artifact.scores.push_back(std::move(s));
        }
    }

    {
        std::ifstream in = open_input(dir / "forecasts.csv");
        std::string line;
        if (!std::getline(in, line)) {
            throw Error(ErrorCategory::validation, "forecasts.csv: empty");
        }
        const std::vector<std::string> header = split_csv(line);
        if (header.size() < 6 || header[0] != "model" || header[5] != "median" ||
            (header.size() - 6) % 2 != 0) {
            throw Error(ErrorCategory::validation, "forecasts.csv: bad header");
        }
        std::vector<double> alphas;
        for (std::size_t i = 6; i < header.size(); i += 2) {
            if (header[i].rfind("lower_", 0) != 0 || header[i + 1].rfind("upper_", 0) != 0) {
                throw Error(ErrorCategory::validation, "forecasts.csv: bad interval columns");
            }
            alphas.push_back(std::stod(header[i].substr(6)));
        }
        int row = 1;
        while (std::getline(in, line)) {
            ++row;
            if (trim(line).empty()) continue;
            const std::vector<std::string> f = split_csv(line);
            if (f.size() != header.size()) {
                throw Error(ErrorCategory::validation,
                            "forecasts.csv row " + std::to_string(row) + ": field count");
            }
            ForecastRow r;
            r.model = f[0];
            r.region = f[1];
            r.origin = epiweek_containing(parse_date(f[2]));
            r.target = epiweek_containing(parse_date(f[3]));
            r.horizon = static_cast<int>(parse_number(f[4], "horizon", row));
            r.quantiles.median = parse_number(f[5], "median", row);
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                IntervalBound b;
                b.alpha = alphas[i];
                b.lower = parse_number(f[6 + 2 * i], "lower", row);
                b.upper = parse_number(f[7 + 2 * i], "upper", row);
                r.quantiles.intervals.push_back(b);
            }
            artifact.forecasts.push_back(std::move(r));
        }
    }

    std::set<std::string> models, regions;
    int max_horizon = 0;
    for (const ScoreRecord& s : artifact.scores) {
        models.insert(s.model);
        regions.insert(s.region);
        max_horizon = std::max(max_horizon, s.horizon);
    }
    for (const ForecastRow& r : artifact.forecasts) {
        models.insert(r.model);
        regions.insert(r.region);
        max_horizon = std::max(max_horizon, r.horizon);
    }
    artifact.summary = aggregate(artifact.scores, ordered_models(models),
                                 ordered_regions(regions), max_horizon);
    artifact.skill = skill_table(artifact.summary);
    return artifact;
}

void write_synthetic_dataset(const std::filesystem::path& path, Date start, Date end,
                             std::uint64_t seed) {
    const std::vector<EpiWeek> weeks = epiweek_range(start, end);
    if (weeks.empty()) {
        throw Error(ErrorCategory::validation, "no epiweeks in requested range");
    }
    std::ofstream out = open_output(path);
    out << "week_ending,region,wval\n";
    const int n = static_cast<int>(weeks.size());
    for (const Region& region : census_regions()) {
        Rng rng = make_rng(hash_combine(seed, region.name));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> noise(0.0, 1.0);

        // Recurring epidemic waves: Gaussian bumps spaced roughly half a year
        // apart with varying amplitude and width.
        struct Wave { double center, amp, width; };
        std::vector<Wave> waves;
        double center = 4.0 + 10.0 * unif(rng);
        while (center < n + 10.0) {
            waves.push_back({center, 1.5 + 4.5 * unif(rng), 2.5 + 2.5 * unif(rng)});
            center += 20.0 + 14.0 * unif(rng);
        }

        for (int t = 0; t < n; ++t) {
            double v = 0.35;
            for (const Wave& w : waves) {
                const double z = (t - w.center) / w.width;
                v += w.amp * std::exp(-0.5 * z * z);
            }
            v = std::max(0.0, v + 0.08 * noise(rng));
            out << format_date(weeks[t].end_date) << ',' << region.name << ','
                << fmt(v) << '\n';
        }
    }
}

} // namespace wwf
