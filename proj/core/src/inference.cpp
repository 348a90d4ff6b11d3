#include "trc/inference.hpp"

#include <cmath>
#include <numbers>

#include "trc/errors.hpp"

namespace trc {

Factorization::Factorization(const Eigen::MatrixXd& K, double noise_variance) {
  if (K.rows() != K.cols()) throw NumericalError("stable_factorize: matrix not square");
  if (!(noise_variance >= 0.0)) {
    throw NumericalError("stable_factorize: negative noise variance");
  }
  const Eigen::Index n = K.rows();
  const Eigen::MatrixXd base =
      K + noise_variance * Eigen::MatrixXd::Identity(n, n);
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd shifted = base;
    if (jitter > 0.0) shifted.diagonal().array() += jitter;
    llt_.compute(shifted);
    if (llt_.info() == Eigen::Success) {
      jitter_ = jitter;
      const Eigen::VectorXd d = llt_.matrixLLT().diagonal();
      const double dmax = d.maxCoeff();
      const double dmin = d.minCoeff();
      condition_ = dmin > 0.0 ? (dmax / dmin) * (dmax / dmin)
                              : std::numeric_limits<double>::infinity();
      return;
    }
    jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
    if (jitter > 1e-6) {
      throw NumericalError("stable_factorize: covariance not factorizable at jitter 1e-6");
    }
  }
}

double Factorization::log_det() const {
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Factorization stable_factorize(const Eigen::MatrixXd& K, double noise_variance) {
  return Factorization(K, noise_variance);
}

double log_marginal_likelihood(const Factorization& factor, const Eigen::VectorXd& y) {
  if (y.size() != factor.size()) {
    throw NumericalError("log_marginal_likelihood: dimension mismatch");
  }
  const Eigen::VectorXd alpha = factor.solve(y);
  const double n = static_cast<double>(y.size());
  return -0.5 * y.dot(alpha) - 0.5 * factor.log_det() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

double log_marginal_likelihood(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                               double noise_variance) {
  return log_marginal_likelihood(stable_factorize(K, noise_variance), y);
}

PosteriorPart posterior_part(const Factorization& factor, const Eigen::MatrixXd& cross,
                             const Eigen::MatrixXd& prior_at_query, const Eigen::VectorXd& y) {
  if (cross.cols() != factor.size() || cross.rows() != prior_at_query.rows() ||
      prior_at_query.rows() != prior_at_query.cols()) {
    throw NumericalError("posterior_part: shape mismatch");
  }
  PosteriorPart out;
  out.mean = cross * factor.solve(y);
  const Eigen::MatrixXd cross_t = cross.transpose();
  out.cov = prior_at_query - cross * factor.solve(cross_t);
  return out;
}

namespace {

Eigen::VectorXd clamp_variances(const Eigen::MatrixXd& cov, int& clamped) {
  Eigen::VectorXd var = cov.diagonal();
  for (Eigen::Index i = 0; i < var.size(); ++i) {
    if (var[i] < 0.0) {
      var[i] = 0.0;
      ++clamped;
    }
  }
  return var;
}

}  // namespace

PosteriorDecomposition predict(const Dataset& train, const ModelParams& params,
                               const std::vector<QueryPoint>& queries,
                               const Dataset* query_context, FitDiagnostics* diagnostics) {
  const CovarianceBundle bundle = assemble_total_cov(train, params);
  const Eigen::VectorXd y = flatten_values(train);
  const Factorization factor = stable_factorize(bundle.total, params.noise_variance);
  if (diagnostics) {
    diagnostics->jitter = factor.jitter();
    diagnostics->condition = factor.condition();
    diagnostics->log_marginal = log_marginal_likelihood(factor, y);
  }

  PosteriorDecomposition out;
  out.queries = queries;
  out.noise_variance = params.noise_variance;
  const int blocks = params.num_response_blocks();
  out.component_mean.resize(blocks);
  out.component_var.resize(blocks);

  const auto run_part = [&](CovPart part, int block) {
    const Eigen::MatrixXd cross =
        cross_cov(train, params, queries, part, block, query_context);
    const Eigen::MatrixXd prior =
        query_prior_cov(train, params, queries, part, block, query_context);
    return posterior_part(factor, cross, prior, y);
  };

  PosteriorPart total = run_part(CovPart::Total, 0);
  out.total_mean = std::move(total.mean);
  out.total_var = clamp_variances(total.cov, out.clamped_variances);
  out.total_var_noisy = out.total_var.array() + params.noise_variance;

  PosteriorPart base = run_part(CovPart::Baseline, 0);
  out.baseline_mean = std::move(base.mean);
  out.baseline_var = clamp_variances(base.cov, out.clamped_variances);

  for (int q = 0; q < blocks; ++q) {
    PosteriorPart comp = run_part(CovPart::Component, q);
    out.component_mean[q] = std::move(comp.mean);
    out.component_var[q] = clamp_variances(comp.cov, out.clamped_variances);
  }
  return out;
}

}  // namespace trc
