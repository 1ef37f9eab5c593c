#include "wwf/series.hpp"

#include "wwf/error.hpp"

#include <algorithm>
#include <cmath>

namespace wwf {

void WvalSeries::validate() const {
    if (weeks.size() != values.size()) {
        throw Error(ErrorCategory::validation,
                    "series '" + region + "': week/value count mismatch");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw Error(ErrorCategory::validation,
                        "series '" + region + "': non-finite or negative value at " +
                            format_date(weeks[i].end_date));
        }
        if (i > 0 && weeks[i].end_date != weeks[i - 1].end_date + std::chrono::days{7}) {
            throw Error(ErrorCategory::validation,
                        "series '" + region + "': weekly grid gap between " +
                            format_date(weeks[i - 1].end_date) + " and " +
                            format_date(weeks[i].end_date));
        }
    }
}

const std::vector<Region>& census_regions() {
    static const std::vector<Region> regions = {
        {"National", {}},
        {"West",
         {"AK", "AZ", "CA", "CO", "GU", "HI", "ID", "MT", "NV", "NM", "OR", "UT", "WA",
          "WY"}},
        {"Midwest",
         {"IL", "IN", "IA", "KS", "MI", "MN", "MO", "NE", "ND", "OH", "SD", "WI"}},
        {"Northeast", {"CT", "ME", "MA", "NH", "NJ", "NY", "PA", "PR", "RI", "VT"}},
        {"South",
         {"AR", "AL", "DE", "DC", "FL", "GA", "KY", "LA", "MD", "MS", "NC", "OK", "SC",
          "TN", "TX", "VA", "WV"}},
    };
    return regions;
}

bool is_known_region(const std::string& name) {
    const auto& regions = census_regions();
    return std::any_of(regions.begin(), regions.end(),
                       [&](const Region& r) { return r.name == name; });
}

double wval_from_sd(double x) {
    if (!std::isfinite(x)) {
        throw Error(ErrorCategory::validation, "wval_from_sd: non-finite input");
    }
    return std::exp(x);
}

std::vector<double> moving_average(const std::vector<double>& values, int window) {
    const int n = static_cast<int>(values.size());
    if (window < 1) {
        throw Error(ErrorCategory::validation, "moving_average: window must be >= 1");
    }
    if (window > n) {
        throw Error(ErrorCategory::validation,
                    "moving_average: window " + std::to_string(window) +
                        " exceeds series length " + std::to_string(n));
    }
    const int half = (window - 1) / 2;
    const int half_up = window / 2;
    std::vector<double> out(values.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half_up);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += values[j];
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

WvalSeries moving_average(const WvalSeries& series, int window) {
    WvalSeries out = series;
    out.values = moving_average(series.values, window);
    return out;
}

CalibrationWindow slice_window(const WvalSeries& series, const EpiWeek& origin, int w) {
    const auto it = std::find(series.weeks.begin(), series.weeks.end(), origin);
    if (it == series.weeks.end()) {
        throw Error(ErrorCategory::insufficient_data,
                    "slice_window: origin " + format_date(origin.end_date) +
                        " not present in series '" + series.region + "'");
    }
    const auto origin_idx = static_cast<int>(it - series.weeks.begin());
    const int available = origin_idx + 1;
    if (available < w) {
        throw Error(ErrorCategory::insufficient_data,
                    "slice_window: need " + std::to_string(w) + " weeks ending at " +
                        format_date(origin.end_date) + " but only " +
                        std::to_string(available) + " available (deficit " +
                        std::to_string(w - available) + ")");
    }
    CalibrationWindow win;
    win.origin = origin;
    win.w = w;
    win.weeks.assign(series.weeks.begin() + (origin_idx - w + 1),
                     series.weeks.begin() + origin_idx + 1);
    win.values.assign(series.values.begin() + (origin_idx - w + 1),
                      series.values.begin() + origin_idx + 1);
    return win;
}

} // namespace wwf
