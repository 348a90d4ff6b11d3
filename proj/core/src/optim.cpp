#include "trc/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "trc/errors.hpp"

namespace trc {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start,
                             const NelderMeadOptions& options) {
  const int dim = static_cast<int>(start.size());
  if (dim < 1) throw ConfigError("nelder_mead: empty parameter vector");

  NelderMeadResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evals;
    const double f = objective(x);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };

  std::vector<Eigen::VectorXd> simplex(dim + 1, start);
  std::vector<double> fvals(dim + 1);
  fvals[0] = eval(start);
  if (!std::isfinite(fvals[0])) {
    throw NumericalError("nelder_mead: objective not finite at the starting point");
  }
  for (int i = 0; i < dim; ++i) {
    simplex[i + 1][i] += options.initial_step;
    fvals[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<int> order(dim + 1);
  std::iota(order.begin(), order.end(), 0);

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  while (result.evals < options.max_evals) {
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fvals[a] < fvals[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second_worst = order[dim - 1];

    double diameter = 0.0;
    for (int i = 1; i <= dim; ++i) {
      diameter = std::max(diameter, (simplex[order[i]] - simplex[best]).lpNorm<Eigen::Infinity>());
    }
    const double fspread = std::isfinite(fvals[worst]) ? fvals[worst] - fvals[best]
                                                       : std::numeric_limits<double>::infinity();
    if (diameter < options.x_tol || fspread < options.f_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i <= dim; ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= dim;

    const Eigen::VectorXd reflected = centroid + alpha * (centroid - simplex[worst]);
    const double f_reflected = eval(reflected);

    if (f_reflected < fvals[order[0]]) {
      const Eigen::VectorXd expanded = centroid + gamma * (reflected - centroid);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        fvals[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        fvals[worst] = f_reflected;
      }
    } else if (f_reflected < fvals[second_worst]) {
      simplex[worst] = reflected;
      fvals[worst] = f_reflected;
    } else {
      const bool outside = f_reflected < fvals[worst];
      Eigen::VectorXd contracted;
      if (outside) {
        contracted = centroid + rho * (reflected - centroid);
      } else {
        contracted = centroid - rho * (centroid - simplex[worst]);
      }
      const double f_contracted = eval(contracted);
      if (f_contracted < std::min(f_reflected, fvals[worst])) {
        simplex[worst] = contracted;
        fvals[worst] = f_contracted;
      } else {
        for (int i = 0; i <= dim; ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + sigma * (simplex[i] - simplex[best]);
          fvals[i] = eval(simplex[i]);
        }
      }
    }
  }

  const auto best_it = std::min_element(fvals.begin(), fvals.end());
  result.fx = *best_it;
  result.x = simplex[static_cast<int>(best_it - fvals.begin())];
  return result;
}

}  // namespace trc
