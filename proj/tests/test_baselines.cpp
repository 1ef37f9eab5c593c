#include "wwf/arima.hpp"
#include "wwf/gam.hpp"
#include "wwf/slr.hpp"
#include "wwf/trendcast.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wwf;
using wwf::testing::make_window;

namespace {

std::vector<double> line(double b0, double b1, int n) {
    std::vector<double> v(n);
    for (int t = 0; t < n; ++t) v[t] = b0 + b1 * t;
    return v;
}

} // namespace

TEST_CASE("SLR is exact on a noiseless line") {
    const CalibrationWindow window = make_window(line(2.0, 0.5, 10));
    const SlrFit fit = fit_slr(window);
    CHECK(fit.beta0 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.beta1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.sigma == doctest::Approx(0.0).epsilon(1e-9));
    for (int h = 1; h <= 4; ++h) {
        CHECK(slr_point(fit, h) == doctest::Approx(2.0 + 0.5 * (9 + h)).epsilon(1e-10));
    }
}

TEST_CASE("SLR intervals widen with the horizon") {
    std::vector<double> values = line(1.0, 0.3, 10);
    values[3] += 0.4;
    values[7] -= 0.3;
    const SlrFit fit = fit_slr(make_window(values));
    const ForecastDistribution dist =
        forecast_slr(fit, epiweek_containing(parse_date("2022-03-05")), 4,
                     default_alphas());
    double prev_width = 0.0;
    for (const HorizonForecast& hf : dist.horizons) {
        const IntervalBound* b = hf.quantiles.find_alpha(0.05);
        REQUIRE(b != nullptr);
        const double width = b->upper - b->lower;
        CHECK(width > prev_width);
        prev_width = width;
    }
}

TEST_CASE("GAM interpolates a smooth signal in-window") {
    std::vector<double> values;
    for (int t = 0; t < 10; ++t) values.push_back(2.0 + std::sin(0.4 * t));
    const GamFit fit = fit_gam(make_window(values));
    for (int t = 0; t < 10; ++t) {
        CHECK(gam_value(fit, t) == doctest::Approx(values[t]).epsilon(0.05));
    }
}

TEST_CASE("GAM in the high-penalty limit matches SLR point forecasts") {
    std::vector<double> values = line(1.5, 0.4, 10);
    values[2] += 0.5;
    values[6] -= 0.7;
    const CalibrationWindow window = make_window(values);
    const GamFit gam = fit_gam(window, -1, 1e12);
    const SlrFit slr = fit_slr(window);
    for (int h = 1; h <= 4; ++h) {
        CHECK(gam_point(gam, h) == doctest::Approx(slr_point(slr, h)).epsilon(1e-6));
    }
}

TEST_CASE("KPSS separates stationary noise from a trending series") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> stationary(200), trending(200);
    for (int t = 0; t < 200; ++t) {
        stationary[t] = noise(rng);
        trending[t] = 0.1 * t + noise(rng);
    }
    CHECK(kpss_statistic(stationary) < 0.463);
    CHECK(kpss_statistic(trending) > 0.463);
}

TEST_CASE("ARIMA(0,1,0) forecasts flat at the last observation") {
    ArimaFit fit;
    fit.order = {0, 1, 0};
    fit.sigma = 0.5;
    fit.window = {1.0, 1.7, 2.2, 3.1, 2.8};
    const std::vector<double> points = arima_point_forecasts(fit, 4);
    REQUIRE(points.size() == 4);
    for (double p : points) CHECK(p == doctest::Approx(2.8).epsilon(1e-12));

    const ForecastDistribution dist =
        forecast_arima(fit, epiweek_containing(parse_date("2022-03-05")), 4,
                       default_alphas());
    // Random-walk variance grows linearly: sd(h) = sigma * sqrt(h).
    const IntervalBound* b1 = dist.horizons[0].quantiles.find_alpha(0.05);
    const IntervalBound* b4 = dist.horizons[3].quantiles.find_alpha(0.05);
    REQUIRE(b1 != nullptr);
    REQUIRE(b4 != nullptr);
    CHECK((b4->upper - 2.8) == doctest::Approx(2.0 * (b1->upper - 2.8)).epsilon(1e-6));
}

TEST_CASE("AR(1) point forecasts decay toward the mean") {
    ArimaFit fit;
    fit.order = {1, 0, 0};
    fit.phi = {0.5};
    fit.mu = 2.0;
    fit.c = 1.0;
    fit.sigma = 0.1;
    fit.window = {2.0, 2.0, 4.0};
    const std::vector<double> points = arima_point_forecasts(fit, 3);
    CHECK(points[0] == doctest::Approx(2.0 + 0.5 * 2.0).epsilon(1e-12));
    CHECK(points[1] == doctest::Approx(2.0 + 0.25 * 2.0).epsilon(1e-12));
    CHECK(points[2] == doctest::Approx(2.0 + 0.125 * 2.0).epsilon(1e-12));
}

TEST_CASE("automatic ARIMA mostly picks white noise on white noise") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> noise(5.0, 1.0);
    int white = 0;
    const int reps = 30;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> values(40);
        for (double& v : values) v = std::max(0.0, noise(rng));
        const ArimaFit fit = fit_arima(make_window(values));
        if (fit.order.p == 0 && fit.order.d == 0 && fit.order.q == 0) ++white;
    }
    CHECK(white > reps / 2);
}

TEST_CASE("ARIMA fits a short window without throwing") {
    std::vector<double> values = {1.0, 1.4, 2.2, 3.5, 5.1, 6.0, 6.3, 6.1, 5.2, 4.0};
    const ArimaFit fit = fit_arima(make_window(values));
    const ForecastDistribution dist =
        forecast_arima(fit, epiweek_containing(parse_date("2022-03-05")), 4,
                       default_alphas());
    for (const HorizonForecast& hf : dist.horizons) {
        CHECK(std::isfinite(hf.quantiles.median));
        CHECK(hf.quantiles.median >= 0.0);
    }
}

TEST_CASE("trend model recovers a clean linear trend") {
    const TrendCastFit fit = fit_trendcast(make_window(line(1.0, 0.25, 10)));
    CHECK(trendcast_value(fit, 9.0) == doctest::Approx(1.0 + 0.25 * 9).epsilon(1e-3));
    CHECK(trendcast_value(fit, 13.0) == doctest::Approx(1.0 + 0.25 * 13).epsilon(5e-2));
}

TEST_CASE("trend model on a flat window forecasts the constant") {
    const TrendCastFit fit = fit_trendcast(make_window(std::vector<double>(10, 3.0)));
    const ForecastDistribution dist =
        forecast_trendcast(fit, epiweek_containing(parse_date("2022-03-05")), 4,
                           default_alphas(), 9);
    for (const HorizonForecast& hf : dist.horizons) {
        CHECK(hf.quantiles.median == doctest::Approx(3.0).epsilon(1e-9));
    }
}

TEST_CASE("trend forecasts are deterministic in the seed") {
    std::vector<double> values = {1.0, 1.2, 1.1, 1.6, 2.4, 3.3, 4.8, 5.0, 5.1, 4.7};
    const TrendCastFit fit = fit_trendcast(make_window(values));
    const EpiWeek origin = epiweek_containing(parse_date("2022-03-05"));
    const ForecastDistribution a =
        forecast_trendcast(fit, origin, 4, default_alphas(), 31);
    const ForecastDistribution b =
        forecast_trendcast(fit, origin, 4, default_alphas(), 31);
    for (int h = 0; h < 4; ++h) {
        CHECK(a.horizons[h].quantiles.median == b.horizons[h].quantiles.median);
    }
}
