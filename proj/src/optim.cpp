#include "wwf/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace wwf {

namespace {

double sse_of(const Eigen::VectorXd& r) {
    double s = 0.0;
    for (int i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i])) return std::numeric_limits<double>::infinity();
        s += r[i] * r[i];
    }
    return s;
}

} // namespace

OptimResult levenberg_marquardt(const ResidualFn& residuals, const Eigen::VectorXd& x0,
                                int n_residuals, const LmOptions& opts) {
    const int n = static_cast<int>(x0.size());
    Eigen::VectorXd x = x0;
    Eigen::VectorXd r(n_residuals), r_trial(n_residuals), r_pert(n_residuals);
    Eigen::MatrixXd jac(n_residuals, n);

    residuals(x, r);
    double sse = sse_of(r);
    OptimResult best{x, sse, false, 0};
    if (!std::isfinite(sse)) return best;

    double lambda = 1e-3;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        best.iterations = iter + 1;
        // Forward-difference Jacobian.
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd xp = x;
            const double h = opts.fd_step * std::max(1.0, std::abs(x[j]));
            xp[j] += h;
            residuals(xp, r_pert);
            for (int i = 0; i < n_residuals; ++i) {
                const double d = (r_pert[i] - r[i]) / h;
                jac(i, j) = std::isfinite(d) ? d : 0.0;
            }
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;

        bool stepped = false;
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::MatrixXd a = jtj;
            for (int j = 0; j < n; ++j) a(j, j) += lambda * std::max(jtj(j, j), 1e-12);
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd x_trial = x + step;
            residuals(x_trial, r_trial);
            const double sse_trial = sse_of(r_trial);
            if (sse_trial < sse) {
                const double rel = (sse - sse_trial) / std::max(sse, 1e-300);
                x = x_trial;
                r = r_trial;
                sse = sse_trial;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (rel < opts.ftol || step.norm() < opts.xtol * (1.0 + x.norm())) {
                    best = {x, sse, true, iter + 1};
                    return best;
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) {
            best = {x, sse, true, iter + 1};  // local minimum within damping range
            return best;
        }
    }
    best = {x, sse, true, opts.max_iterations};
    return best;
}

OptimResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, const NmOptions& opts) {
    const int n = static_cast<int>(x0.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : inf;
    };
    vals[0] = eval(pts[0]);
    for (int i = 0; i < n; ++i) {
        pts[i + 1][i] += opts.initial_step * std::max(1.0, std::abs(x0[i]));
        vals[i + 1] = eval(pts[i + 1]);
    }

    while (evals < opts.max_evaluations) {
        std::vector<int> order(n + 1);
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        const int lo = order[0], hi = order[n], second_hi = order[n - 1];
        if (std::isfinite(vals[lo]) && std::isfinite(vals[hi]) &&
            vals[hi] - vals[lo] <= opts.ftol * (std::abs(vals[lo]) + 1e-300)) {
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i) {
            if (i != hi) centroid += pts[i];
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd refl = centroid + (centroid - pts[hi]);
        const double f_refl = eval(refl);
        if (f_refl < vals[lo]) {
            const Eigen::VectorXd expand = centroid + 2.0 * (centroid - pts[hi]);
            const double f_exp = eval(expand);
            if (f_exp < f_refl) {
                pts[hi] = expand;
                vals[hi] = f_exp;
            } else {
                pts[hi] = refl;
                vals[hi] = f_refl;
            }
        } else if (f_refl < vals[second_hi]) {
            pts[hi] = refl;
            vals[hi] = f_refl;
        } else {
            const Eigen::VectorXd contract = centroid + 0.5 * (pts[hi] - centroid);
            const double f_con = eval(contract);
            if (f_con < vals[hi]) {
                pts[hi] = contract;
                vals[hi] = f_con;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == lo) continue;
                    pts[i] = pts[lo] + 0.5 * (pts[i] - pts[lo]);
                    vals[i] = eval(pts[i]);
                }
            }
        }
    }
    int lo = 0;
    for (int i = 1; i <= n; ++i) {
        if (vals[i] < vals[lo]) lo = i;
    }
    return {pts[lo], vals[lo], std::isfinite(vals[lo]), evals};
}

} // namespace wwf
