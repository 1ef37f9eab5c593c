#pragma once

#include "wwf/series.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wwf {

// Parameters of an n-sub-epidemic trajectory (n = 1 or 2). Each sub-epidemic i
// follows dC_i/dt = A_i(t) r_i C_i^{p_i} (1 - C_i/K0_i); sub-epidemic i >= 2
// activates once C_{i-1} exceeds c_thr.
struct SubEpidemicParams {
    int n = 1;
    std::vector<double> r;   // intrinsic growth rates, per week
    std::vector<double> p;   // scaling exponents in [0, 1]
    std::vector<double> k0;  // plateau levels
    double c_thr = 0.0;      // activation threshold (used when n >= 2)
    double i0 = 0.0;         // C_1(0)
};

struct Trajectory {
    int steps_per_week = 0;
    std::vector<double> times;              // week offsets, 0..horizon
    std::vector<std::vector<double>> c;     // c[i][step], per sub-epidemic
    std::vector<double> c_tot;              // sum over sub-epidemics
};

// Fixed-step RK4 over [0, horizon] weeks. Activation is checked at step
// boundaries; a newly activated sub-epidemic starts from a tiny positive seed
// level (the ODE cannot leave an exact zero when p > 0). Throws on numerical
// blowup.
Trajectory integrate(const SubEpidemicParams& params, int horizon_weeks,
                     int steps_per_week);

// Modeled weekly observations: C_tot sampled at integer weeks.
std::vector<double> fit_signal(const Trajectory& trajectory);

// Corrected Akaike information criterion, natural log. Throws when
// n_d <= m + 1.
double aicc(double sse, int m, int n_d);

// Activation-threshold candidates: uniform partition of the cumulative sum of
// the smoothed window into n_d levels, duplicates removed. Empty for an
// all-zero window.
std::vector<double> candidate_thresholds(const CalibrationWindow& window,
                                         int smoother_width = 3);

struct SubEpidemicFit {
    SubEpidemicParams params;
    double sse = 0.0;
    double aicc = 0.0;
    int m = 0;    // parameter count, 3n + 1
    int n_d = 0;  // calibration data points
    int rank = 0; // 1-based position after AICc ordering (0 = unranked)
};

struct FitConfig {
    int starts = 30;          // multistart restarts
    std::uint64_t seed = 0;
    int steps_per_week = 8;
    int smoother_width = 3;
    int n_max = 2;
};

// Multistart nonlinear least squares for a fixed model structure. c_thr is
// required when n >= 2 and ignored for n = 1. When warm_start is given it is
// used as the first start in place of a random draw (bootstrap refits).
SubEpidemicFit fit_nls(const CalibrationWindow& window, int n,
                       std::optional<double> c_thr, int starts, std::uint64_t seed,
                       int steps_per_week = 8,
                       const SubEpidemicParams* warm_start = nullptr);

// Fits the n=1 model plus one n=2 model per candidate threshold, ranks all
// successful fits by AICc, and returns the best three (fewer if fewer
// converge). Throws when no candidate converges.
std::vector<SubEpidemicFit> rank_candidates(const CalibrationWindow& window,
                                            const FitConfig& config);

// Fitted weekly values over the calibration window for a fit.
std::vector<double> fitted_values(const SubEpidemicFit& fit, int n_weeks,
                                  int steps_per_week = 8);

} // namespace wwf
