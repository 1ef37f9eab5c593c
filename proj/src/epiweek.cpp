#include "wwf/epiweek.hpp"

#include "wwf/error.hpp"

#include <cstdio>

namespace wwf {

namespace {

using namespace std::chrono;

// First Saturday on or after d.
Date next_saturday(Date d) {
    const weekday wd{d};
    const auto offset = (Saturday - wd).count();
    return d + days{offset};
}

EpiWeek from_end_date(Date saturday) {
    const year_month_day ymd{saturday};
    const Date jan1 = Date{ymd.year() / January / 1};
    const Date first_sat = next_saturday(jan1);
    EpiWeek w;
    w.year = static_cast<int>(ymd.year());
    w.week = static_cast<int>((saturday - first_sat).count() / 7) + 1;
    w.end_date = saturday;
    return w;
}

} // namespace

EpiWeek epiweek_containing(Date d) { return from_end_date(next_saturday(d)); }

EpiWeek epiweek_advance(const EpiWeek& w, int weeks) {
    return from_end_date(w.end_date + std::chrono::days{7 * weeks});
}

std::vector<EpiWeek> epiweek_range(Date start, Date end) {
    if (start > end) {
        throw Error(ErrorCategory::validation,
                    "epiweek_range: start " + format_date(start) + " is after end " +
                        format_date(end));
    }
    std::vector<EpiWeek> out;
    for (Date sat = next_saturday(start); sat <= end; sat += std::chrono::days{7}) {
        out.push_back(from_end_date(sat));
    }
    return out;
}

Date parse_date(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char dash1 = 0, dash2 = 0;
    if (std::sscanf(iso.c_str(), "%d%c%d%c%d", &y, &dash1, &m, &dash2, &d) != 5 ||
        dash1 != '-' || dash2 != '-') {
        throw Error(ErrorCategory::validation, "invalid ISO date: '" + iso + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                          std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) {
        throw Error(ErrorCategory::validation, "invalid calendar date: '" + iso + "'");
    }
    return std::chrono::sys_days{ymd};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace wwf
