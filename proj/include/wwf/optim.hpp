#pragma once

#include <Eigen/Dense>

#include <functional>

namespace wwf {

// Residual callback: fills r (fixed length) from parameter vector x. Entries
// may be non-finite; the solvers treat those points as infeasible.
using ResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LmOptions {
    int max_iterations = 60;
    double ftol = 1e-12;   // relative SSE improvement
    double xtol = 1e-10;   // step-size norm
    double fd_step = 1e-6; // forward-difference step for the Jacobian
};

struct OptimResult {
    Eigen::VectorXd x;
    double sse = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Levenberg-Marquardt with forward-difference Jacobian on an unconstrained
// parametrization.
OptimResult levenberg_marquardt(const ResidualFn& residuals, const Eigen::VectorXd& x0,
                                int n_residuals, const LmOptions& opts = {});

struct NmOptions {
    int max_evaluations = 2000;
    double initial_step = 0.25;
    double ftol = 1e-12;
};

// Nelder-Mead simplex on a scalar objective; used as fallback when LM stalls.
OptimResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, const NmOptions& opts = {});

} // namespace wwf
