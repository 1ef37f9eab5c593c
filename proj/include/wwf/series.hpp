#pragma once

#include "wwf/epiweek.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace wwf {

// A contiguous weekly series of wastewater viral activity levels for one region.
// Weeks are strictly increasing with no gaps; values are finite and >= 0.
struct WvalSeries {
    std::string region;
    std::vector<EpiWeek> weeks;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }

    // Validates contiguity/finiteness/non-negativity; throws on violation.
    void validate() const;
};

struct Region {
    std::string name;
    std::vector<std::string> member_states;
};

// National plus the four census regions with their member state lists.
const std::vector<Region>& census_regions();
bool is_known_region(const std::string& name);

// The trailing block of observations used to fit models at one forecast origin.
struct CalibrationWindow {
    EpiWeek origin;               // last observed week
    std::vector<EpiWeek> weeks;   // w weeks ending at origin
    std::vector<double> values;   // same length as weeks
    int w = 0;
};

// WVAL = e^x where x is standard deviations above baseline.
double wval_from_sd(double x);

// Centered moving average with shrinking windows at the boundaries.
WvalSeries moving_average(const WvalSeries& series, int window);
std::vector<double> moving_average(const std::vector<double>& values, int window);

// The w most recent observations ending at origin.
CalibrationWindow slice_window(const WvalSeries& series, const EpiWeek& origin, int w);

} // namespace wwf
