#include "wwf/arima.hpp"

#include "wwf/error.hpp"
#include "wwf/optim.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace wwf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> difference(const std::vector<double>& y) {
    std::vector<double> z(y.size() - 1);
    for (std::size_t t = 1; t < y.size(); ++t) z[t - 1] = y[t] - y[t - 1];
    return z;
}

double variance(const std::vector<double>& y) {
    if (y.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= y.size();
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    return ss / y.size();
}

// All roots of 1 - c_1 z - ... - c_k z^k outside the unit circle.
bool roots_outside_unit_circle(const std::vector<double>& coeffs, double margin = 1.001) {
    int k = static_cast<int>(coeffs.size());
    while (k > 0 && std::abs(coeffs[k - 1]) < 1e-10) --k;
    if (k == 0) return true;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) companion(0, i) = coeffs[i];
    for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
    const Eigen::VectorXcd eig = companion.eigenvalues();
    for (int i = 0; i < k; ++i) {
        if (std::abs(eig[i]) > 1.0 / margin) return false;
    }
    return true;
}

struct ParamView {
    double mu = 0.0;
    std::vector<double> phi;
    std::vector<double> theta;
};

ParamView unpack(const Eigen::VectorXd& x, int p, int q, bool with_mean) {
    ParamView v;
    int idx = 0;
    if (with_mean) v.mu = x[idx++];
    v.phi.resize(p);
    for (int i = 0; i < p; ++i) v.phi[i] = x[idx++];
    v.theta.resize(q);
    for (int i = 0; i < q; ++i) v.theta[i] = x[idx++];
    return v;
}

// Conditional sum of squares with zero presample innovations; theta signs per
// theta(B) = 1 + theta_1 B + ... (innovations enter with a plus).
double css(const std::vector<double>& z, const ParamView& v) {
    const int p = static_cast<int>(v.phi.size());
    const int q = static_cast<int>(v.theta.size());
    const int n = static_cast<int>(z.size());
    std::vector<double> e(n, 0.0);
    double ssq = 0.0;
    int used = 0;
    for (int t = p; t < n; ++t) {
        double pred = v.mu;
        for (int i = 0; i < p; ++i) pred += v.phi[i] * (z[t - 1 - i] - v.mu);
        for (int j = 0; j < q && t - 1 - j >= 0; ++j) pred += v.theta[j] * e[t - 1 - j];
        e[t] = z[t] - pred;
        ssq += e[t] * e[t];
        ++used;
    }
    return used > 0 ? ssq : kInf;
}

double admissibility_penalty(const ParamView& v) {
    double penalty = 0.0;
    if (!roots_outside_unit_circle(v.phi)) penalty += 1.0;
    std::vector<double> neg_theta(v.theta.size());
    for (std::size_t i = 0; i < v.theta.size(); ++i) neg_theta[i] = -v.theta[i];
    if (!roots_outside_unit_circle(neg_theta)) penalty += 1.0;
    return penalty;
}

// Exact Gaussian log-likelihood of a mean-corrected ARMA(p, q) via the Harvey
// state-space form, with sigma^2 concentrated out. Returns (loglik, sigma).
std::pair<double, double> exact_loglik(const std::vector<double>& z, const ParamView& v) {
    const int p = static_cast<int>(v.phi.size());
    const int q = static_cast<int>(v.theta.size());
    const int m = std::max(p, q + 1);
    const int n = static_cast<int>(z.size());

    Eigen::MatrixXd trans = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < p; ++i) trans(i, 0) = v.phi[i];
    for (int i = 0; i + 1 < m; ++i) trans(i, i + 1) = 1.0;
    // Transposed Harvey layout: state recursion a' = T a with observation a[0].
    trans.transposeInPlace();
    Eigen::VectorXd rvec = Eigen::VectorXd::Zero(m);
    rvec[0] = 1.0;
    for (int j = 0; j < q; ++j) rvec[j + 1] = v.theta[j];

    // Stationary covariance: vec(P) = (I - T (x) T)^{-1} vec(R R').
    const Eigen::MatrixXd rr = rvec * rvec.transpose();
    Eigen::MatrixXd kron(m * m, m * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            kron.block(i * m, j * m, m, m) = trans(i, j) * trans;
        }
    }
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m * m, m * m) - kron;
    const Eigen::VectorXd vec_rr =
        Eigen::Map<const Eigen::VectorXd>(rr.data(), m * m);
    const Eigen::VectorXd vec_p = lhs.partialPivLu().solve(vec_rr);
    Eigen::MatrixXd cov = Eigen::Map<const Eigen::MatrixXd>(vec_p.data(), m, m);
    if (!cov.allFinite()) return {-kInf, 0.0};

    Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
    double sum_log_f = 0.0, ssq = 0.0;
    for (int t = 0; t < n; ++t) {
        const double f = cov(0, 0);
        if (!(f > 1e-300) || !std::isfinite(f)) return {-kInf, 0.0};
        const double innov = (z[t] - v.mu) - a[0];
        sum_log_f += std::log(f);
        ssq += innov * innov / f;
        const Eigen::VectorXd gain = trans * cov.col(0) / f;
        a = trans * a + gain * innov;
        cov = trans * cov * trans.transpose() + rr - gain * (cov.row(0) * trans.transpose());
        cov = 0.5 * (cov + cov.transpose());
    }
    const double sigma2 = ssq / n;
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) return {-kInf, std::sqrt(std::max(sigma2, 0.0))};
    const double loglik =
        -0.5 * n * (std::log(2.0 * M_PI) + 1.0 + std::log(sigma2)) - 0.5 * sum_log_f;
    return {loglik, std::sqrt(sigma2)};
}

struct Candidate {
    ParamView params;
    double aicc = kInf;
    double sigma = 0.0;
    bool valid = false;
};

Candidate estimate_arma(const std::vector<double>& z, int p, int q, bool with_mean) {
    const int n = static_cast<int>(z.size());
    const int k = p + q + (with_mean ? 1 : 0) + 1;  // + sigma
    Candidate cand;
    if (n - k - 1 <= 0 || n - p < 3) return cand;

    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= n;

    const int dim = p + q + (with_mean ? 1 : 0);
    ParamView best;
    if (dim == 0) {
        best.mu = 0.0;
    } else {
        const auto objective = [&](const Eigen::VectorXd& x) {
            const ParamView v = unpack(x, p, q, with_mean);
            const double pen = admissibility_penalty(v);
            const double base = css(z, v);
            if (!std::isfinite(base)) return kInf;
            return base * (1.0 + 10.0 * pen) + 1e6 * pen;
        };
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
        if (with_mean) x0[0] = mean;
        NmOptions nm;
        nm.max_evaluations = 400 * dim;
        nm.initial_step = 0.2;
        OptimResult css_fit = nelder_mead(objective, x0, nm);
        if (!std::isfinite(css_fit.sse)) return cand;

        // Gaussian-likelihood refinement from the CSS optimum.
        const auto neg_loglik = [&](const Eigen::VectorXd& x) {
            const ParamView v = unpack(x, p, q, with_mean);
            if (admissibility_penalty(v) > 0.0) return kInf;
            const auto [ll, sigma] = exact_loglik(z, v);
            (void)sigma;
            return std::isfinite(ll) ? -ll : kInf;
        };
        nm.initial_step = 0.05;
        OptimResult ml_fit = nelder_mead(neg_loglik, css_fit.x, nm);
        best = unpack(std::isfinite(ml_fit.sse) ? ml_fit.x : css_fit.x, p, q, with_mean);
    }
    if (!with_mean) best.mu = 0.0;
    if (dim == 0 && with_mean) best.mu = mean;

    const auto [loglik, sigma] = exact_loglik(z, best);
    if (!std::isfinite(loglik)) return cand;
    const double aic = -2.0 * loglik + 2.0 * k;
    cand.params = best;
    cand.sigma = sigma;
    cand.aicc = aic + 2.0 * k * (k + 1.0) / (n - k - 1.0);
    cand.valid = true;
    return cand;
}

} // namespace

double kpss_statistic(const std::vector<double>& series) {
    const int n = static_cast<int>(series.size());
    if (n < 3) return 0.0;
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    std::vector<double> resid(n);
    for (int t = 0; t < n; ++t) resid[t] = series[t] - mean;

    std::vector<double> partial(n);
    double acc = 0.0;
    for (int t = 0; t < n; ++t) {
        acc += resid[t];
        partial[t] = acc;
    }
    double num = 0.0;
    for (double s : partial) num += s * s;
    num /= static_cast<double>(n) * n;

    const int lags = static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 0.25)));
    double lrv = 0.0;
    for (double r : resid) lrv += r * r;
    lrv /= n;
    for (int j = 1; j <= lags; ++j) {
        double gamma = 0.0;
        for (int t = j; t < n; ++t) gamma += resid[t] * resid[t - j];
        gamma /= n;
        lrv += 2.0 * (1.0 - j / (lags + 1.0)) * gamma;
    }
    if (lrv <= 1e-14) return 0.0;  // (near-)constant series is trivially stationary
    return num / lrv;
}

ArimaFit fit_arima(const CalibrationWindow& window, const ArimaSearchConfig& search) {
    const int n = static_cast<int>(window.values.size());
    if (n < 5) {
        throw Error(ErrorCategory::insufficient_data, "fit_arima: window shorter than 5");
    }

    // Differencing order by repeated KPSS tests.
    std::vector<double> z = window.values;
    int d = 0;
    while (d < search.max_d && static_cast<int>(z.size()) > 4 &&
           kpss_statistic(z) > search.kpss_critical) {
        z = difference(z);
        ++d;
    }
    const bool with_mean = (d == 0);
    const int nz = static_cast<int>(z.size());

    ArimaFit fit;
    fit.order.d = d;
    fit.window = window.values;

    if (variance(z) < 1e-14) {
        // Deterministic after differencing: (0, d, 0) with zero noise. For
        // d >= 1 the convention is drift-free, so forecasts stay flat at the
        // last observation.
        fit.mu = with_mean && !z.empty() ? z[0] : 0.0;
        fit.sigma = 0.0;
        fit.aicc = -kInf;
        fit.c = fit.mu;
        return fit;
    }

    std::map<std::pair<int, int>, Candidate> cache;
    const auto evaluate = [&](int p, int q) -> const Candidate& {
        const auto key = std::make_pair(p, q);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, estimate_arma(z, p, q, with_mean)).first;
        }
        return it->second;
    };

    const std::vector<std::pair<int, int>> start_set = {
        {0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 2}};
    std::pair<int, int> current{-1, -1};
    double best_aicc = kInf;
    for (const auto& [p, q] : start_set) {
        if (p > search.max_p || q > search.max_q) continue;
        const Candidate& cand = evaluate(p, q);
        if (cand.valid && cand.aicc < best_aicc) {
            best_aicc = cand.aicc;
            current = {p, q};
        }
    }

    if (current.first >= 0) {
        bool improved = true;
        while (improved) {
            improved = false;
            const int cp = current.first, cq = current.second;
            const std::vector<std::pair<int, int>> moves = {
                {cp - 1, cq}, {cp + 1, cq}, {cp, cq - 1}, {cp, cq + 1},
                {cp - 1, cq - 1}, {cp - 1, cq + 1}, {cp + 1, cq - 1}, {cp + 1, cq + 1}};
            for (const auto& [p, q] : moves) {
                if (p < 0 || q < 0 || p > search.max_p || q > search.max_q) continue;
                const Candidate& cand = evaluate(p, q);
                if (cand.valid && cand.aicc < best_aicc - 1e-10) {
                    best_aicc = cand.aicc;
                    current = {p, q};
                    improved = true;
                }
            }
        }
    }

    if (current.first < 0) {
        // Every candidate failed; drift-free mean model on the differenced scale.
        fit.fallback = true;
        fit.order.p = 0;
        fit.order.q = 0;
        double mean = 0.0;
        for (double v : z) mean += v;
        mean /= nz;
        fit.mu = with_mean ? mean : 0.0;
        fit.sigma = std::sqrt(variance(z));
        fit.aicc = kInf;
        fit.c = fit.mu;
        return fit;
    }

    const Candidate& chosen = evaluate(current.first, current.second);
    fit.order.p = current.first;
    fit.order.q = current.second;
    fit.phi = chosen.params.phi;
    fit.theta = chosen.params.theta;
    fit.mu = chosen.params.mu;
    fit.sigma = chosen.sigma;
    fit.aicc = chosen.aicc;
    double phi_sum = 0.0;
    for (double v : fit.phi) phi_sum += v;
    fit.c = fit.mu * (1.0 - phi_sum);
    return fit;
}

std::vector<double> arima_point_forecasts(const ArimaFit& fit, int max_horizon) {
    const int d = fit.order.d;
    const int p = fit.order.p;
    const int q = fit.order.q;

    // Reconstruct the differenced series and its in-sample innovations.
    std::vector<double> z = fit.window;
    for (int i = 0; i < d; ++i) z = difference(z);
    const int nz = static_cast<int>(z.size());
    std::vector<double> e(nz, 0.0);
    for (int t = p; t < nz; ++t) {
        double pred = fit.mu;
        for (int i = 0; i < p; ++i) pred += fit.phi[i] * (z[t - 1 - i] - fit.mu);
        for (int j = 0; j < q && t - 1 - j >= 0; ++j) pred += fit.theta[j] * e[t - 1 - j];
        e[t] = z[t] - pred;
    }

    // Forecast the differenced series (future innovations zero).
    std::vector<double> zc = z, ec = e;
    std::vector<double> z_fore(max_horizon);
    for (int h = 0; h < max_horizon; ++h) {
        const int t = nz + h;
        double pred = fit.mu;
        for (int i = 0; i < p; ++i) {
            const int idx = t - 1 - i;
            if (idx < 0) continue;
            pred += fit.phi[i] * (zc[idx] - fit.mu);
        }
        for (int j = 0; j < q; ++j) {
            const int idx = t - 1 - j;
            if (idx >= 0 && idx < nz) pred += fit.theta[j] * ec[idx];
        }
        z_fore[h] = pred;
        zc.push_back(pred);
        ec.push_back(0.0);
    }

    // Undo differencing: accumulate onto the tail of the original series.
    std::vector<double> out = z_fore;
    for (int i = d; i >= 1; --i) {
        // Tail value of the (i-1)-times differenced series.
        std::vector<double> lower = fit.window;
        for (int j = 0; j < i - 1; ++j) lower = difference(lower);
        double last = lower.back();
        for (int h = 0; h < max_horizon; ++h) {
            last += out[h];
            out[h] = last;
        }
    }
    return out;
}

ForecastDistribution forecast_arima(const ArimaFit& fit, const EpiWeek& origin,
                                    int max_horizon, const std::vector<double>& alphas) {
    const std::vector<double> points = arima_point_forecasts(fit, max_horizon);

    // Psi weights of theta(B) / (phi(B) (1 - B)^d).
    std::vector<double> phi_star(fit.order.p + fit.order.d, 0.0);
    {
        // Coefficients of phi(B)(1-B)^d written as 1 - sum phi*_i B^i.
        std::vector<double> poly = {1.0};  // phi(B) with sign convention 1 - phi_1 B ...
        for (int i = 0; i < fit.order.p; ++i) poly.push_back(-fit.phi[i]);
        for (int rep = 0; rep < fit.order.d; ++rep) {
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i] += poly[i];
                next[i + 1] -= poly[i];
            }
            poly = next;
        }
        for (std::size_t i = 1; i < poly.size(); ++i) phi_star[i - 1] = -poly[i];
    }
    std::vector<double> psi(max_horizon, 0.0);
    psi[0] = 1.0;
    for (int j = 1; j < max_horizon; ++j) {
        double value = (j <= fit.order.q) ? fit.theta[j - 1] : 0.0;
        for (int i = 1; i <= std::min<int>(j, static_cast<int>(phi_star.size())); ++i) {
            value += phi_star[i - 1] * psi[j - i];
        }
        psi[j] = value;
    }

    ForecastDistribution dist;
    dist.origin = origin;
    double var_acc = 0.0;
    for (int h = 1; h <= max_horizon; ++h) {
        var_acc += psi[h - 1] * psi[h - 1];
        const double sd = fit.sigma * std::sqrt(var_acc);
        HorizonForecast hf;
        hf.quantiles = gaussian_quantiles(points[h - 1], sd, alphas);
        dist.horizons.push_back(std::move(hf));
    }
    return dist;
}

} // namespace wwf
