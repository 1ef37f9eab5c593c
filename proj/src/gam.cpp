#include "wwf/gam.hpp"

#include "wwf/error.hpp"

#include <algorithm>
#include <cmath>

namespace wwf {

namespace {

// Clamped uniform knot vector for K cubic B-splines on [0, t_max].
std::vector<double> make_knots(int basis_count, double t_max) {
    std::vector<double> knots;
    const int interior = basis_count - 4;
    for (int i = 0; i < 4; ++i) knots.push_back(0.0);
    for (int i = 1; i <= interior; ++i) {
        knots.push_back(t_max * i / (interior + 1));
    }
    for (int i = 0; i < 4; ++i) knots.push_back(t_max);
    return knots;
}

// Cox-de Boor recursion; 0/0 terms vanish.
double bspline(const std::vector<double>& tau, int j, int order, double t) {
    if (order == 1) {
        if (tau[j] == tau[j + 1]) return 0.0;  // zero-width span
        if (tau[j + 1] == tau.back() && t == tau.back()) return t >= tau[j] ? 1.0 : 0.0;
        return (t >= tau[j] && t < tau[j + 1]) ? 1.0 : 0.0;
    }
    double left = 0.0, right = 0.0;
    const double dl = tau[j + order - 1] - tau[j];
    if (dl > 0.0) left = (t - tau[j]) / dl * bspline(tau, j, order - 1, t);
    const double dr = tau[j + order] - tau[j + 1];
    if (dr > 0.0) right = (tau[j + order] - t) / dr * bspline(tau, j + 1, order - 1, t);
    return left + right;
}

double bspline_deriv(const std::vector<double>& tau, int j, double t) {
    double left = 0.0, right = 0.0;
    const double dl = tau[j + 3] - tau[j];
    if (dl > 0.0) left = bspline(tau, j, 3, t) / dl;
    const double dr = tau[j + 4] - tau[j + 1];
    if (dr > 0.0) right = bspline(tau, j + 1, 3, t) / dr;
    return 3.0 * (left - right);
}

Eigen::VectorXd basis_row(const std::vector<double>& tau, int basis_count, double t) {
    Eigen::VectorXd row(basis_count);
    for (int j = 0; j < basis_count; ++j) row[j] = bspline(tau, j, 4, t);
    return row;
}

struct Solved {
    Eigen::VectorXd coeffs;
    Eigen::MatrixXd rinv;
    double rss = 0.0;
    double edf = 0.0;
};

// Penalized least squares via QR of the augmented system [B; sqrt(lambda) D].
Solved solve_penalized(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& diff2,
                       const Eigen::VectorXd& y, double lambda) {
    const int n = static_cast<int>(basis.rows());
    const int k = static_cast<int>(basis.cols());
    Eigen::MatrixXd aug(n + diff2.rows(), k);
    aug.topRows(n) = basis;
    aug.bottomRows(diff2.rows()) = std::sqrt(lambda) * diff2;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(aug.rows());
    rhs.head(n) = y;

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(aug);
    Solved out;
    out.coeffs = qr.solve(rhs);
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    out.rinv = r.inverse();

    const Eigen::VectorXd fitted = basis * out.coeffs;
    out.rss = (y - fitted).squaredNorm();
    // edf = tr(B (B'B + lambda P)^{-1} B') = ||B R^{-1}||_F^2.
    out.edf = (basis * out.rinv).squaredNorm();
    return out;
}

} // namespace

GamFit fit_gam(const CalibrationWindow& window, int basis_count,
               double lambda_override) {
    const int n = static_cast<int>(window.values.size());
    if (basis_count < 0) basis_count = std::min(10, n - 3);
    if (basis_count < 4 || basis_count > n) {
        throw Error(ErrorCategory::insufficient_data,
                    "fit_gam: need window length >= basis_count >= 4");
    }
    const double t_max = n - 1.0;
    const std::vector<double> knots = make_knots(basis_count, t_max);

    Eigen::MatrixXd basis(n, basis_count);
    for (int t = 0; t < n; ++t) {
        basis.row(t) = basis_row(knots, basis_count, static_cast<double>(t)).transpose();
    }
    // Second divided differences of the coefficients over the Greville
    // abscissae: the penalty vanishes exactly on linear splines, so the
    // high-lambda limit is the least-squares line.
    std::vector<double> greville(basis_count);
    for (int j = 0; j < basis_count; ++j) {
        greville[j] = (knots[j + 1] + knots[j + 2] + knots[j + 3]) / 3.0;
    }
    Eigen::MatrixXd diff2 = Eigen::MatrixXd::Zero(basis_count - 2, basis_count);
    for (int i = 0; i < basis_count - 2; ++i) {
        const double h1 = greville[i + 1] - greville[i];
        const double h2 = greville[i + 2] - greville[i + 1];
        diff2(i, i) = 1.0 / h1;
        diff2(i, i + 1) = -1.0 / h1 - 1.0 / h2;
        diff2(i, i + 2) = 1.0 / h2;
    }
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(window.values.data(), n);

    double best_lambda = lambda_override;
    Solved best;
    if (lambda_override >= 0.0) {
        best = solve_penalized(basis, diff2, y, lambda_override);
    } else {
        double best_gcv = std::numeric_limits<double>::infinity();
        for (double log10_lambda = -6.0; log10_lambda <= 12.0; log10_lambda += 0.5) {
            const double lambda = std::pow(10.0, log10_lambda);
            Solved s = solve_penalized(basis, diff2, y, lambda);
            const double denom = n - s.edf;
            if (denom <= 0.0) continue;
            const double gcv = n * s.rss / (denom * denom);
            if (std::isfinite(gcv) && gcv < best_gcv) {
                best_gcv = gcv;
                best_lambda = lambda;
                best = std::move(s);
            }
        }
        if (!std::isfinite(best_gcv)) {
            throw Error(ErrorCategory::fit_failure,
                        "fit_gam: every lambda on the ladder was singular");
        }
    }

    GamFit fit;
    fit.coeffs = best.coeffs;
    fit.knots = knots;
    fit.lambda = best_lambda;
    fit.edf = best.edf;
    fit.n = n;
    fit.basis_count = basis_count;
    fit.rinv = best.rinv;
    fit.t_end = t_max;
    const double dof = std::max(n - best.edf, 1.0);
    fit.sigma = std::sqrt(std::max(best.rss, 0.0) / dof);
    fit.f_end = basis_row(knots, basis_count, t_max).dot(best.coeffs);
    Eigen::VectorXd drow(basis_count);
    for (int j = 0; j < basis_count; ++j) drow[j] = bspline_deriv(knots, j, t_max);
    fit.slope_end = drow.dot(best.coeffs);
    return fit;
}

double gam_value(const GamFit& fit, double t) {
    return basis_row(fit.knots, fit.basis_count, t).dot(fit.coeffs);
}

double gam_point(const GamFit& fit, int horizon) {
    return fit.f_end + horizon * fit.slope_end;
}

ForecastDistribution forecast_gam(const GamFit& fit, const EpiWeek& origin,
                                  int max_horizon, const std::vector<double>& alphas) {
    // Extrapolated basis row: b(t_end) + h * b'(t_end).
    const Eigen::VectorXd b_end = basis_row(fit.knots, fit.basis_count, fit.t_end);
    Eigen::VectorXd d_end(fit.basis_count);
    for (int j = 0; j < fit.basis_count; ++j) {
        d_end[j] = bspline_deriv(fit.knots, j, fit.t_end);
    }

    ForecastDistribution dist;
    dist.origin = origin;
    for (int h = 1; h <= max_horizon; ++h) {
        const Eigen::VectorXd x = b_end + h * d_end;
        const double lever = (fit.rinv.transpose() * x).squaredNorm();
        const double sd = fit.sigma * std::sqrt(1.0 + lever);
        HorizonForecast hf;
        hf.quantiles = gaussian_quantiles(gam_point(fit, h), sd, alphas);
        dist.horizons.push_back(std::move(hf));
    }
    return dist;
}

} // namespace wwf
