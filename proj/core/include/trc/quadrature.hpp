#pragma once

#include <Eigen/Core>

namespace trc {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Nodes and weights for an n-point rule. Results are cached per n and safe
// to request from multiple threads.
const GaussLegendre& gauss_legendre(int n);

// Rescales a [-1,1] rule to [a, b].
GaussLegendre rescale(const GaussLegendre& rule, double a, double b);

}  // namespace trc
