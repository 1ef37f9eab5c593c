#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <vector>

namespace wwf {

using Date = std::chrono::sys_days;

// One epidemiological reporting week. Weeks end on Saturday; end_date is the
// week's final day, so consecutive weeks have end dates exactly 7 days apart.
struct EpiWeek {
    int year = 0;  // calendar year of end_date
    int week = 0;  // 1-based index of the end date's Saturday within its year
    Date end_date{};

    friend std::strong_ordering operator<=>(const EpiWeek& a, const EpiWeek& b) {
        return a.end_date <=> b.end_date;
    }
    friend bool operator==(const EpiWeek& a, const EpiWeek& b) {
        return a.end_date == b.end_date;
    }
};

// The epiweek containing calendar date d.
EpiWeek epiweek_containing(Date d);

// Advance by a (possibly negative) number of weeks.
EpiWeek epiweek_advance(const EpiWeek& w, int weeks);

// Every epiweek whose end_date lies in [start, end]. Throws on start > end.
std::vector<EpiWeek> epiweek_range(Date start, Date end);

Date parse_date(const std::string& iso);       // "YYYY-MM-DD"
std::string format_date(Date d);

} // namespace wwf
