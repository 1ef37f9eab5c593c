#pragma once

#include "wwf/epiweek.hpp"
#include "wwf/series.hpp"

#include <string>
#include <vector>

namespace wwf::testing {

inline WvalSeries make_series(const std::vector<double>& values,
                              const std::string& region = "National",
                              const std::string& start = "2022-01-01") {
    WvalSeries s;
    s.region = region;
    EpiWeek w = epiweek_containing(parse_date(start));
    for (double v : values) {
        s.weeks.push_back(w);
        s.values.push_back(v);
        w = epiweek_advance(w, 1);
    }
    return s;
}

inline CalibrationWindow make_window(const std::vector<double>& values,
                                     const std::string& start = "2022-01-01") {
    const WvalSeries s = make_series(values, "National", start);
    CalibrationWindow win;
    win.origin = s.weeks.back();
    win.weeks = s.weeks;
    win.values = s.values;
    win.w = static_cast<int>(values.size());
    return win;
}

} // namespace wwf::testing
