#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "trc/errors.hpp"
#include "trc/inference.hpp"
#include "trc/simdata.hpp"

using namespace trc;

TEST_CASE("stable_factorize of a zero matrix is the identity scaled by noise") {
  const Eigen::MatrixXd K = Eigen::MatrixXd::Zero(4, 4);
  const Factorization f = stable_factorize(K, 1.0);
  CHECK(f.jitter() == 0.0);
  const Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
  CHECK((f.solve(rhs) - rhs).lpNorm<Eigen::Infinity>() < 1e-14);
  CHECK(f.log_det() == doctest::Approx(0.0));
}

TEST_CASE("stable_factorize solve round-trip on a random PSD matrix") {
  Rng rng(31);
  const int n = 20;
  Eigen::MatrixXd A(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) A(r, c) = rng.normal();
  }
  const Eigen::MatrixXd K = A * A.transpose();
  const Factorization f = stable_factorize(K, 0.5);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.normal();
  const Eigen::VectorXd rhs = K * x + 0.5 * x;
  CHECK((f.solve(rhs) - x).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("stable_factorize fails on an indefinite matrix with tiny noise") {
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(3, 3);
  K(2, 2) = -1.0;
  CHECK_THROWS_AS(stable_factorize(K, 1e-12), NumericalError);
}

TEST_CASE("log marginal likelihood analytic cases") {
  const Eigen::MatrixXd K = Eigen::MatrixXd::Zero(1, 1);
  Eigen::VectorXd y(1);
  y << 0.0;
  CHECK(log_marginal_likelihood(K, y, 1.0) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
  y << 2.0;
  CHECK(log_marginal_likelihood(K, y, 1.0) ==
        doctest::Approx(-2.0 - 0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("log marginal likelihood permutation invariance") {
  Rng rng(32);
  const int n = 12;
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) {
    y[r] = rng.normal();
    for (int c = 0; c < n; ++c) A(r, c) = rng.normal();
  }
  const Eigen::MatrixXd K = A * A.transpose();
  const double base = log_marginal_likelihood(K, y, 0.3);

  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  perm.setIdentity();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.integer(static_cast<std::uint64_t>(i + 1)))]);
  }
  for (int i = 0; i < n; ++i) perm.indices()[i] = order[static_cast<std::size_t>(i)];

  const Eigen::MatrixXd Kp = perm * K * perm.transpose();
  const Eigen::VectorXd yp = perm * y;
  CHECK(log_marginal_likelihood(Kp, yp, 0.3) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("log marginal likelihood matches the dense inverse route") {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + static_cast<int>(rng.integer(26));
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
      y[r] = rng.normal();
      for (int c = 0; c < n; ++c) A(r, c) = rng.normal();
    }
    const Eigen::MatrixXd K = A * A.transpose() / n;
    const double noise = 0.4;
    const Eigen::MatrixXd Kn = K + noise * Eigen::MatrixXd::Identity(n, n);
    const double direct = -0.5 * y.dot(Kn.inverse() * y) -
                          0.5 * std::log(Kn.determinant()) -
                          0.5 * n * std::log(2.0 * std::numbers::pi);
    CHECK(log_marginal_likelihood(K, y, noise) == doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("posterior_part with a zero cross row transfers nothing") {
  const Eigen::MatrixXd K = Eigen::MatrixXd::Identity(3, 3);
  const Factorization f = stable_factorize(K, 0.1);
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(2, 3);
  cross(1, 0) = 0.4;
  Eigen::MatrixXd prior = Eigen::MatrixXd::Identity(2, 2) * 0.9;
  Eigen::VectorXd y(3);
  y << 1.0, -2.0, 0.5;
  const PosteriorPart part = posterior_part(f, cross, prior, y);
  CHECK(part.mean[0] == 0.0);
  CHECK(part.cov(0, 0) == doctest::Approx(0.9));
  CHECK(part.mean[1] != 0.0);
  CHECK(part.cov(1, 1) < 0.9);

  CHECK_THROWS_AS(posterior_part(f, Eigen::MatrixXd::Zero(2, 4), prior, y), NumericalError);
}

namespace {

// Draws y from the model so the posterior checks operate on data the
// covariance can actually explain.
Dataset sampled_dataset(Rng& rng, ModelKind kind, ModelParams& params_out) {
  Dataset data = helpers::random_dataset(rng, 3, 3, 16);
  params_out = helpers::random_params(rng, kind, data);
  const CovarianceBundle bundle = assemble_total_cov(data, params_out);
  Eigen::MatrixXd noisy = bundle.total;
  noisy.diagonal().array() += params_out.noise_variance;
  const Eigen::VectorXd y = sample_gp(noisy, rng);
  Eigen::Index at = 0;
  for (auto& rec : data.patients) {
    for (auto& v : rec.values) v = y[at++];
  }
  return data;
}

}  // namespace

TEST_CASE("posterior decomposition adds up and variances behave") {
  Rng rng(34);
  const ModelKind kinds[] = {ModelKind::GpResp, ModelKind::GpLfm, ModelKind::GpConv};
  for (int trial = 0; trial < 12; ++trial) {
    ModelParams params;
    const Dataset data = sampled_dataset(rng, kinds[trial % 3], params);

    std::vector<QueryPoint> queries;
    for (const auto& row : flatten_rows(data)) queries.push_back({row.patient, row.time});
    for (int extra = 0; extra < 4; ++extra) {
      queries.push_back({static_cast<int>(rng.integer(data.num_patients())),
                         rng.uniform(0.0, 14.0)});
    }

    const PosteriorDecomposition post = predict(data, params, queries);

    Eigen::VectorXd sum = post.baseline_mean;
    for (const auto& m : post.component_mean) sum += m;
    CHECK((sum - post.total_mean).lpNorm<Eigen::Infinity>() < 1e-8);

    CHECK((post.total_var.array() >= 0.0).all());
    CHECK((post.baseline_var.array() >= 0.0).all());
    CHECK(((post.total_var_noisy - post.total_var).array() - params.noise_variance)
              .abs()
              .maxCoeff() < 1e-14);

    // Information never hurts: posterior variance <= prior variance.
    const Eigen::MatrixXd prior = query_prior_cov(data, params, queries, CovPart::Total);
    for (Eigen::Index i = 0; i < post.total_var.size(); ++i) {
      CHECK(post.total_var[i] <= prior(i, i) + 1e-10);
    }
  }
}

TEST_CASE("noiseless interpolation reproduces the training targets") {
  Rng rng(35);
  ModelParams params;
  Dataset data = sampled_dataset(rng, ModelKind::GpResp, params);
  params.noise_variance = 1e-10;
  // Redraw values noiselessly from this exact prior.
  const CovarianceBundle bundle = assemble_total_cov(data, params);
  const Eigen::VectorXd y = sample_gp(bundle.total, rng);
  Eigen::Index at = 0;
  for (auto& rec : data.patients) {
    for (auto& v : rec.values) v = y[at++];
  }

  std::vector<QueryPoint> queries;
  for (const auto& row : flatten_rows(data)) queries.push_back({row.patient, row.time});
  const PosteriorDecomposition post = predict(data, params, queries);
  CHECK((post.total_mean - y).lpNorm<Eigen::Infinity>() < 1e-3);
}

TEST_CASE("queries far from any meal reduce to the baseline posterior") {
  Rng rng(36);
  ModelParams params;
  const Dataset data = sampled_dataset(rng, ModelKind::GpResp, params);
  const std::vector<QueryPoint> queries = {{0, 200.0}, {0, 205.0}};
  const PosteriorDecomposition post = predict(data, params, queries);
  CHECK((post.total_mean - post.baseline_mean).lpNorm<Eigen::Infinity>() < 1e-12);
  for (const auto& m : post.component_mean) {
    CHECK(m.lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("predict reports factorization diagnostics") {
  Rng rng(37);
  ModelParams params;
  const Dataset data = sampled_dataset(rng, ModelKind::GpResp, params);
  FitDiagnostics diag;
  predict(data, params, {{0, 1.0}}, nullptr, &diag);
  CHECK(std::isfinite(diag.log_marginal));
  CHECK(diag.jitter <= 1e-6);
  CHECK(diag.condition >= 1.0);
}
