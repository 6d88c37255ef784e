#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace volclust::optim {

/// Objective to minimize. Infeasible points return +inf (or NaN); the
/// optimizers treat them as rejections.
using Objective = std::function<double(std::span<const double>)>;

struct Result {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

struct NelderMeadOptions {
    int max_iterations = 2000;
    double ftol = 1e-8;     // absolute spread of objective values across the simplex
    double xtol = 1e-8;     // max vertex distance from the best vertex
    double initial_step = 0.1;
};

/// Nelder-Mead downhill simplex with standard coefficients
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5).
[[nodiscard]] Result nelder_mead(const Objective& f, std::span<const double> x0,
                                 const NelderMeadOptions& opts = {});

struct QuasiNewtonOptions {
    int max_iterations = 200;
    double gtol = 1e-6;  // infinity norm of the gradient
    double ftol = 1e-12; // relative objective change at which iterations stop
};

/// BFGS with central finite-difference gradients and backtracking line search.
[[nodiscard]] Result bfgs(const Objective& f, std::span<const double> x0,
                          const QuasiNewtonOptions& opts = {});

/// Newton steps using a finite-difference Hessian; stops when the Hessian is
/// not positive definite or no step decreases the objective.
[[nodiscard]] Result newton_polish(const Objective& f, std::span<const double> x0, int max_steps,
                                   double gtol);

/// Central difference gradient with step h_i = 1e-5 * max(1, |x_i|).
[[nodiscard]] Eigen::VectorXd gradient(const Objective& f, std::span<const double> x);

/// Central difference Hessian with per-coordinate step h_i = max(1e-5, 1e-4 |x_i|).
/// Non-finite entries are left as NaN.
[[nodiscard]] Eigen::MatrixXd hessian(const Objective& f, std::span<const double> x);

/// Inverse of a symmetric matrix when it is positive definite.
[[nodiscard]] std::optional<Eigen::MatrixXd> inverse_if_positive_definite(const Eigen::MatrixXd& m);

}  // namespace volclust::optim
