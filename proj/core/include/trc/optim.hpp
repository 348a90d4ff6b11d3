#pragma once

#include <Eigen/Core>
#include <functional>

namespace trc {

struct NelderMeadOptions {
  int max_evals = 2000;
  double x_tol = 1e-8;       // simplex diameter convergence
  double f_tol = 1e-10;      // objective spread convergence
  double initial_step = 0.25;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;
};

// Derivative-free simplex minimization. The objective may return +inf to
// reject a point; the starting point must evaluate finite.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start,
                             const NelderMeadOptions& options = {});

}  // namespace trc
