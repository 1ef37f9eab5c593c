#include "wwf/error.hpp"
#include "wwf/subepidemic.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace wwf;
using wwf::testing::make_window;

namespace {

double logistic_closed_form(double r, double k, double i0, double t) {
    return k / (1.0 + (k / i0 - 1.0) * std::exp(-r * t));
}

SubEpidemicParams logistic_params(double r, double k, double i0) {
    SubEpidemicParams params;
    params.n = 1;
    params.r = {r};
    params.p = {1.0};
    params.k0 = {k};
    params.i0 = i0;
    return params;
}

} // namespace

TEST_CASE("RK4 matches the closed-form logistic at p = 1") {
    const SubEpidemicParams params = logistic_params(0.5, 100.0, 1.0);
    const Trajectory traj = integrate(params, 20, 8);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const double exact = logistic_closed_form(0.5, 100.0, 1.0, traj.times[s]);
        CHECK(std::abs(traj.c_tot[s] - exact) / exact < 1e-6);
    }
}

TEST_CASE("RK4 converges at fourth order under step halving") {
    const SubEpidemicParams params = logistic_params(1.4, 80.0, 0.5);
    auto max_err = [&](int steps) {
        const Trajectory traj = integrate(params, 10, steps);
        double worst = 0.0;
        for (std::size_t s = 0; s < traj.times.size(); ++s) {
            const double exact = logistic_closed_form(1.4, 80.0, 0.5, traj.times[s]);
            worst = std::max(worst, std::abs(traj.c_tot[s] - exact));
        }
        return worst;
    };
    const double e4 = max_err(4);
    const double e8 = max_err(8);
    CHECK(e4 / e8 > 12.0);
    CHECK(e4 / e8 < 20.0);
}

TEST_CASE("fit_signal samples the trajectory at integer weeks") {
    const Trajectory traj = integrate(logistic_params(0.8, 30.0, 1.0), 5, 8);
    const std::vector<double> signal = fit_signal(traj);
    REQUIRE(signal.size() == 6);
    CHECK(signal[0] == doctest::Approx(1.0));
    CHECK(signal[5] == doctest::Approx(traj.c_tot.back()));
}

TEST_CASE("a second sub-epidemic stays dormant until the threshold crossing") {
    SubEpidemicParams params;
    params.n = 2;
    params.r = {1.0, 1.5};
    params.p = {1.0, 1.0};
    params.k0 = {20.0, 40.0};
    params.i0 = 0.5;
    params.c_thr = 10.0;
    const Trajectory traj = integrate(params, 15, 8);
    bool seen_dormant = false;
    bool seen_active = false;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        if (traj.c[0][s] < 10.0 && !seen_active) {
            // Dormant while the first component is below threshold.
            CHECK(traj.c[1][s] == 0.0);
            seen_dormant = true;
        }
        if (traj.c[1][s] > 0.0) seen_active = true;
        CHECK(traj.c_tot[s] ==
              doctest::Approx(traj.c[0][s] + traj.c[1][s]).epsilon(1e-12));
    }
    CHECK(seen_dormant);
    CHECK(seen_active);
    CHECK(traj.c[1].back() > 1.0);  // it actually grows once seeded
}

TEST_CASE("AICc matches the closed-form value") {
    // 10*ln(1) + 2*4 + 2*4*5/(10-4-1) = 16.
    CHECK(aicc(1.0, 4, 10) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK_THROWS_AS(aicc(1.0, 4, 5), Error);
}

TEST_CASE("AICc property: direct formula over random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> sse_dist(1e-6, 1e3);
    std::uniform_int_distribution<int> m_dist(1, 7);
    for (int trial = 0; trial < 1000; ++trial) {
        const double sse = sse_dist(rng);
        const int m = m_dist(rng);
        const int n_d = m + 2 + static_cast<int>(rng() % 40);
        const double direct = n_d * std::log(sse) + 2.0 * m +
                              2.0 * m * (m + 1.0) / (n_d - m - 1.0);
        CHECK(aicc(sse, m, n_d) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("threshold candidates are positive, increasing, and deduplicated") {
    const CalibrationWindow window =
        make_window({1.0, 2.0, 4.0, 7.0, 9.0, 8.0, 6.0, 5.0, 4.5, 4.0});
    const std::vector<double> thr = candidate_thresholds(window);
    REQUIRE_FALSE(thr.empty());
    CHECK(std::is_sorted(thr.begin(), thr.end()));
    CHECK(thr.front() > 0.0);
    CHECK(std::adjacent_find(thr.begin(), thr.end()) == thr.end());
}

TEST_CASE("threshold candidates are empty for an all-zero window") {
    const CalibrationWindow window = make_window(std::vector<double>(10, 0.0));
    CHECK(candidate_thresholds(window).empty());
}

TEST_CASE("fit_nls recovers a clean single logistic") {
    std::vector<double> values;
    for (int t = 0; t < 10; ++t) {
        values.push_back(logistic_closed_form(0.8, 12.0, 1.0, t));
    }
    const CalibrationWindow window = make_window(values);
    const SubEpidemicFit fit = fit_nls(window, 1, std::nullopt, 30, 99);
    CHECK(fit.m == 4);
    CHECK(fit.n_d == 10);
    CHECK(fit.sse < 1e-4);
    const std::vector<double> fitted = fitted_values(fit, 10);
    for (int t = 0; t < 10; ++t) {
        CHECK(fitted[t] == doctest::Approx(values[t]).epsilon(0.02));
    }
}

TEST_CASE("fit_nls is deterministic in the seed") {
    std::vector<double> values;
    for (int t = 0; t < 10; ++t) {
        values.push_back(logistic_closed_form(0.6, 9.0, 0.8, t) + 0.05 * ((t * 37) % 11));
    }
    const CalibrationWindow window = make_window(values);
    const SubEpidemicFit a = fit_nls(window, 1, std::nullopt, 10, 42);
    const SubEpidemicFit b = fit_nls(window, 1, std::nullopt, 10, 42);
    CHECK(a.sse == b.sse);
    CHECK(a.params.r[0] == b.params.r[0]);
    CHECK(a.params.k0[0] == b.params.k0[0]);
}

TEST_CASE("rank_candidates returns at most three fits ordered by AICc") {
    std::vector<double> values;
    for (int t = 0; t < 10; ++t) {
        values.push_back(logistic_closed_form(0.9, 10.0, 0.7, t) + 0.1);
    }
    const CalibrationWindow window = make_window(values);
    FitConfig config;
    config.starts = 10;
    config.seed = 5;
    const std::vector<SubEpidemicFit> ranked = rank_candidates(window, config);
    REQUIRE_FALSE(ranked.empty());
    CHECK(ranked.size() <= 3);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        CHECK(ranked[i].rank == static_cast<int>(i) + 1);
        if (i > 0) CHECK(ranked[i].aicc >= ranked[i - 1].aicc);
    }
}

TEST_CASE("integrate rejects a non-finite parameterization") {
    SubEpidemicParams params = logistic_params(std::nan(""), 10.0, 1.0);
    CHECK_THROWS_AS(integrate(params, 5, 8), Error);
}
