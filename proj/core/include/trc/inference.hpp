#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <limits>
#include <vector>

#include "trc/covariance.hpp"
#include "trc/data.hpp"

namespace trc {

// Cholesky factor of K + noise_variance I, with escalating diagonal jitter
// when the plain factorization fails.
class Factorization {
 public:
  Factorization(const Eigen::MatrixXd& K, double noise_variance);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }

  double log_det() const;
  double jitter() const { return jitter_; }
  // Squared ratio of extreme Cholesky diagonal entries; a cheap condition
  // number proxy.
  double condition() const { return condition_; }
  Eigen::Index size() const { return llt_.matrixLLT().rows(); }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
  double condition_ = std::numeric_limits<double>::quiet_NaN();
};

Factorization stable_factorize(const Eigen::MatrixXd& K, double noise_variance);

double log_marginal_likelihood(const Factorization& factor, const Eigen::VectorXd& y);
double log_marginal_likelihood(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                               double noise_variance);

struct PosteriorPart {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// mean = cross alpha, cov = prior - cross (K + sigma^2 I)^{-1} cross^T.
PosteriorPart posterior_part(const Factorization& factor, const Eigen::MatrixXd& cross,
                             const Eigen::MatrixXd& prior_at_query, const Eigen::VectorXd& y);

struct FitDiagnostics {
  double log_marginal = std::numeric_limits<double>::quiet_NaN();
  double jitter = 0.0;
  double condition = std::numeric_limits<double>::quiet_NaN();
};

// Predictive means and variances for the total signal, the baseline, and
// each response block. Latent means add up: total = baseline + sum blocks.
struct PosteriorDecomposition {
  std::vector<QueryPoint> queries;
  Eigen::VectorXd total_mean;
  Eigen::VectorXd total_var;        // latent
  Eigen::VectorXd total_var_noisy;  // latent + noise variance
  Eigen::VectorXd baseline_mean;
  Eigen::VectorXd baseline_var;
  std::vector<Eigen::VectorXd> component_mean;
  std::vector<Eigen::VectorXd> component_var;
  int clamped_variances = 0;
  double noise_variance = 0.0;
};

// Exact GP posterior for centered training values at the query points.
// `query_context` supplies query-side meals when they differ from training.
PosteriorDecomposition predict(const Dataset& train, const ModelParams& params,
                               const std::vector<QueryPoint>& queries,
                               const Dataset* query_context = nullptr,
                               FitDiagnostics* diagnostics = nullptr);

}  // namespace trc
