#include "wwf/subepidemic.hpp"

#include "wwf/error.hpp"
#include "wwf/optim.hpp"
#include "wwf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wwf {

namespace {

constexpr double kActivationSeed = 1e-3;

double growth_rate(double c, double r, double p, double k0) {
    const double cc = std::max(c, 0.0);
    return r * std::pow(cc, p) * (1.0 - cc / k0);
}

// Natural-parameter vector layout for the optimizer:
// [log r_1..n, logit p_1..n, log k0_1..n, logit(i0 / i0_hi)]
struct Transform {
    int n;
    double i0_hi;

    static double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }
    static double logit(double u) {
        const double v = std::clamp(u, 1e-12, 1.0 - 1e-12);
        return std::log(v / (1.0 - v));
    }

    SubEpidemicParams to_params(const Eigen::VectorXd& x, double c_thr) const {
        SubEpidemicParams params;
        params.n = n;
        params.c_thr = c_thr;
        params.r.resize(n);
        params.p.resize(n);
        params.k0.resize(n);
        for (int i = 0; i < n; ++i) {
            params.r[i] = std::exp(x[i]);
            params.p[i] = sigmoid(x[n + i]);
            params.k0[i] = std::exp(x[2 * n + i]);
        }
        params.i0 = i0_hi * sigmoid(x[3 * n]);
        return params;
    }

    Eigen::VectorXd from_params(const SubEpidemicParams& params) const {
        Eigen::VectorXd x(3 * n + 1);
        for (int i = 0; i < n; ++i) {
            x[i] = std::log(std::max(params.r[i], 1e-12));
            x[n + i] = logit(params.p[i]);
            x[2 * n + i] = std::log(std::max(params.k0[i], 1e-12));
        }
        x[3 * n] = logit(params.i0 / i0_hi);
        return x;
    }
};

} // namespace

Trajectory integrate(const SubEpidemicParams& params, int horizon_weeks,
                     int steps_per_week) {
    if (horizon_weeks < 0 || steps_per_week < 4) {
        throw Error(ErrorCategory::validation,
                    "integrate: horizon must be >= 0 and steps_per_week >= 4");
    }
    const int n = params.n;
    const int n_steps = horizon_weeks * steps_per_week;
    const double dt = 1.0 / steps_per_week;

    Trajectory traj;
    traj.steps_per_week = steps_per_week;
    traj.times.resize(n_steps + 1);
    traj.c.assign(n, std::vector<double>(n_steps + 1, 0.0));
    traj.c_tot.assign(n_steps + 1, 0.0);

    std::vector<double> state(n, 0.0);
    std::vector<char> active(n, 0);
    state[0] = params.i0;
    active[0] = 1;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto rhs = [&](const std::vector<double>& s, std::vector<double>* out) {
        for (int i = 0; i < n; ++i) {
            (*out)[i] = active[i]
                            ? growth_rate(s[i], params.r[i], params.p[i], params.k0[i])
                            : 0.0;
        }
    };

    auto record = [&](int step) {
        traj.times[step] = step * dt;
        double tot = 0.0;
        for (int i = 0; i < n; ++i) {
            traj.c[i][step] = state[i];
            tot += state[i];
        }
        traj.c_tot[step] = tot;
    };
    record(0);

    for (int step = 0; step < n_steps; ++step) {
        // Threshold-crossing activation, checked at step resolution.
        for (int i = 1; i < n; ++i) {
            if (!active[i] && state[i - 1] > params.c_thr) {
                active[i] = 1;
                state[i] = kActivationSeed;
            }
        }
        rhs(state, &k1);
        for (int i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
        rhs(tmp, &k2);
        for (int i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
        rhs(tmp, &k3);
        for (int i = 0; i < n; ++i) tmp[i] = state[i] + dt * k3[i];
        rhs(tmp, &k4);
        for (int i = 0; i < n; ++i) {
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(state[i])) {
                throw Error(ErrorCategory::numeric,
                            "integrate: non-finite state for sub-epidemic " +
                                std::to_string(i + 1) + " (r=" + std::to_string(params.r[i]) +
                                ", p=" + std::to_string(params.p[i]) +
                                ", K0=" + std::to_string(params.k0[i]) + ")");
            }
            state[i] = std::clamp(state[i], 0.0, params.k0[i]);
        }
        record(step + 1);
    }
    return traj;
}

std::vector<double> fit_signal(const Trajectory& trajectory) {
    std::vector<double> weekly;
    for (std::size_t s = 0; s < trajectory.c_tot.size(); s += trajectory.steps_per_week) {
        weekly.push_back(trajectory.c_tot[s]);
    }
    return weekly;
}

double aicc(double sse, int m, int n_d) {
    if (n_d <= m + 1) {
        throw Error(ErrorCategory::validation,
                    "aicc undefined: n_d=" + std::to_string(n_d) +
                        " requires n_d > m+1 with m=" + std::to_string(m));
    }
    return n_d * std::log(sse) + 2.0 * m +
           2.0 * m * (m + 1.0) / (static_cast<double>(n_d) - m - 1.0);
}

std::vector<double> candidate_thresholds(const CalibrationWindow& window,
                                         int smoother_width) {
    const int n_d = static_cast<int>(window.values.size());
    if (n_d < 3) {
        throw Error(ErrorCategory::insufficient_data,
                    "candidate_thresholds: window shorter than 3");
    }
    const int width = std::min(smoother_width, n_d);
    const std::vector<double> smoothed = moving_average(window.values, width);
    std::vector<double> cumsum(smoothed.size());
    std::partial_sum(smoothed.begin(), smoothed.end(), cumsum.begin());
    const double s_max = cumsum.back();
    if (s_max <= 0.0) return {};

    std::vector<double> levels;
    for (int k = 1; k <= n_d; ++k) {
        const double level = s_max * k / n_d;
        if (level <= 0.0) continue;
        if (!levels.empty() && std::abs(level - levels.back()) < 1e-12 * s_max) continue;
        levels.push_back(level);
    }
    return levels;
}

std::vector<double> fitted_values(const SubEpidemicFit& fit, int n_weeks,
                                  int steps_per_week) {
    const Trajectory traj = integrate(fit.params, n_weeks - 1, steps_per_week);
    return fit_signal(traj);
}

SubEpidemicFit fit_nls(const CalibrationWindow& window, int n,
                       std::optional<double> c_thr, int starts, std::uint64_t seed,
                       int steps_per_week, const SubEpidemicParams* warm_start) {
    const int n_d = static_cast<int>(window.values.size());
    const int m = 3 * n + 1;
    if (starts < 1) {
        throw Error(ErrorCategory::validation, "fit_nls: starts must be >= 1");
    }
    if (n_d <= m + 1) {
        throw Error(ErrorCategory::insufficient_data,
                    "fit_nls: AICc undefined for n_d=" + std::to_string(n_d) +
                        ", m=" + std::to_string(m));
    }
    if (n >= 2 && !c_thr) {
        throw Error(ErrorCategory::validation, "fit_nls: c_thr required for n >= 2");
    }
    const double maxval = *std::max_element(window.values.begin(), window.values.end());
    if (maxval <= 0.0) {
        throw Error(ErrorCategory::fit_failure,
                    "fit_nls: all-zero window has no growth signal to fit");
    }
    const double threshold = (n >= 2) ? *c_thr : 0.0;

    Transform tf{n, window.values.front() + 0.05 * maxval + 1e-6};
    Eigen::VectorXd resid_buf(n_d);
    const ResidualFn residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
        SubEpidemicParams params = tf.to_params(x, threshold);
        try {
            const Trajectory traj = integrate(params, n_d - 1, steps_per_week);
            for (int t = 0; t < n_d; ++t) {
                r[t] = window.values[t] - traj.c_tot[t * steps_per_week];
            }
        } catch (const Error&) {
            r.setConstant(1e8);
        }
    };
    const auto objective = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r(n_d);
        residuals(x, r);
        return r.squaredNorm();
    };

    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Data-informed anchor for n >= 2: the smoothed window shows when the
    // signal first exceeds the activation threshold, which pins the first
    // wave's plateau near the level reached just after crossing and leaves
    // the remaining rise to the second wave.
    bool have_anchor = false;
    SubEpidemicParams anchor;
    if (n >= 2) {
        const std::vector<double> smoothed = moving_average(window.values, 3);
        int crossing = -1;
        for (int t = 0; t < n_d; ++t) {
            if (smoothed[t] > threshold) { crossing = t; break; }
        }
        if (crossing >= 0 && crossing < n_d - 1) {
            const double smax = *std::max_element(smoothed.begin(), smoothed.end());
            anchor.n = n;
            anchor.c_thr = threshold;
            anchor.i0 = std::clamp(window.values.front(), 1e-3, tf.i0_hi * 0.98);
            anchor.r.assign(n, 1.0);
            anchor.p.assign(n, 0.9);
            anchor.k0.resize(n);
            anchor.k0[0] = std::max(smoothed[std::min(crossing + 1, n_d - 1)],
                                    1.05 * threshold);
            for (int i = 1; i < n; ++i) {
                anchor.k0[i] =
                    std::max((smax - anchor.k0[0]) / (n - 1), 0.05 * maxval);
            }
            have_anchor = true;
        }
    }

    double best_sse = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x;
    for (int s = 0; s < starts; ++s) {
        Eigen::VectorXd x0(3 * n + 1);
        if (s == 0 && warm_start) {
            x0 = tf.from_params(*warm_start);
            OptimResult res = levenberg_marquardt(residuals, x0, n_d);
            if (std::isfinite(res.sse) && res.sse < best_sse) {
                best_sse = res.sse;
                best_x = res.x;
            }
            continue;
        }
        if (have_anchor && s % 3 == 1) {
            // Anchor-guided starts: exact heuristic once, then jittered copies.
            SubEpidemicParams guess = anchor;
            if (s > 1) {
                for (int i = 0; i < n; ++i) {
                    guess.r[i] = std::exp(std::log(0.3) +
                                          unif(rng) * std::log(10.0 / 0.3));
                    guess.p[i] = 0.5 + 0.45 * unif(rng);
                    guess.k0[i] *= std::exp(0.6 * (unif(rng) - 0.5));
                }
                guess.k0[0] = std::max(guess.k0[0], 1.05 * threshold);
            }
            x0 = tf.from_params(guess);
        } else {
            for (int i = 0; i < n; ++i) {
                // r log-uniform in [1e-3, 10]
                x0[i] = std::log(1e-3) + unif(rng) * (std::log(10.0) - std::log(1e-3));
                // p uniform in [0, 1] (logit-clamped)
                x0[n + i] = Transform::logit(0.02 + 0.96 * unif(rng));
                // K0: with a single wave the plateau must reach the data maximum,
                // so sample log-uniform in [max(window), 1e4 * max(window)]. With
                // n >= 2 individual plateaus can sit well below the window
                // maximum; the first wave's plateau must still exceed the
                // activation threshold or the later waves never switch on.
                double k_lo = maxval;
                double k_hi = 1e4 * maxval;
                if (n >= 2) {
                    k_lo = (i == 0) ? std::max(1.05 * threshold, 0.05 * maxval)
                                    : 0.05 * maxval;
                    k_hi = std::max(20.0 * maxval, 2.0 * k_lo);
                }
                x0[2 * n + i] = std::log(k_lo) + unif(rng) * std::log(k_hi / k_lo);
            }
            // I0 uniform in (0, first observation + eps)
            x0[3 * n] = Transform::logit(0.02 + 0.96 * unif(rng));
        }

        OptimResult res = levenberg_marquardt(residuals, x0, n_d);
        if (!res.converged || !std::isfinite(res.sse)) {
            res = nelder_mead(objective, x0);
        }
        if (std::isfinite(res.sse) && res.sse < best_sse) {
            best_sse = res.sse;
            best_x = res.x;
        }
    }
    if (!std::isfinite(best_sse)) {
        throw Error(ErrorCategory::fit_failure,
                    "fit_nls: no multistart converged for n=" + std::to_string(n));
    }

    SubEpidemicFit fit;
    fit.params = tf.to_params(best_x, threshold);
    fit.sse = best_sse;
    fit.m = m;
    fit.n_d = n_d;
    fit.aicc = aicc(best_sse, m, n_d);
    return fit;
}

std::vector<SubEpidemicFit> rank_candidates(const CalibrationWindow& window,
                                            const FitConfig& config) {
    std::vector<SubEpidemicFit> fits;
    auto try_fit = [&](int n, std::optional<double> thr, std::uint64_t sub_seed) {
        try {
            fits.push_back(fit_nls(window, n, thr, config.starts, sub_seed,
                                   config.steps_per_week));
        } catch (const Error&) {
            // Failed candidates are dropped; ranking proceeds over survivors.
        }
    };

    try_fit(1, std::nullopt, hash_combine(config.seed, "n1"));
    if (config.n_max >= 2 &&
        static_cast<int>(window.values.size()) > 3 * 2 + 2) {
        const auto thresholds = candidate_thresholds(window, config.smoother_width);
        for (std::size_t j = 0; j < thresholds.size(); ++j) {
            try_fit(2, thresholds[j], hash_combine(hash_combine(config.seed, "n2"), j));
        }
    }
    if (fits.empty()) {
        throw Error(ErrorCategory::fit_failure,
                    "rank_candidates: no sub-epidemic candidate converged at origin " +
                        format_date(window.origin.end_date));
    }
    std::stable_sort(fits.begin(), fits.end(),
                     [](const SubEpidemicFit& a, const SubEpidemicFit& b) {
                         return a.aicc < b.aicc;
                     });
    if (fits.size() > 3) fits.resize(3);
    for (std::size_t i = 0; i < fits.size(); ++i) {
        fits[i].rank = static_cast<int>(i) + 1;
    }
    return fits;
}

} // namespace wwf
