#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trc/covariance.hpp"
#include "trc/data.hpp"
#include "trc/parametric.hpp"
#include "trc/rng.hpp"

namespace trc {

struct ComponentSpec {
  std::string name;
  double median_grams = 40.0;
  double log_sd = 0.4;
};

// Synthetic cohort configuration. When gp_params/bell_params are not
// supplied, per-patient generating parameters are drawn from seeded
// defaults and recorded in the truth.
struct SimConfig {
  int patients = 12;
  int days = 3;
  double grid_minutes = 15.0;
  int meals_per_day_min = 2;
  int meals_per_day_max = 3;
  std::vector<ComponentSpec> components = {{"carbs", 40.0, 0.4}, {"fat", 15.0, 0.5}};
  ModelKind kind = ModelKind::GpResp;
  std::optional<ModelParams> gp_params;
  std::optional<BellParams> bell_params;
  double noise_sd = 0.3;
  double basal_mean = 5.5;  // per-patient constant glucose level
  double basal_sd = 0.4;
  std::uint64_t seed = 1;

  void validate() const;
};

// Ground truth attached to a generated dataset: per-patient curves on the
// observation grid plus the generating parameters.
struct SyntheticTruth {
  ModelKind kind = ModelKind::GpResp;
  std::vector<Eigen::VectorXd> baseline;                // includes the basal level
  std::vector<std::vector<Eigen::VectorXd>> component;  // [patient][block]
  std::vector<Eigen::VectorXd> total;
  std::vector<double> basal;
  ModelParams gp_params;
  BellParams bell_params;
  double noise_sd = 0.0;
};

struct SimResult {
  Dataset data;
  SyntheticTruth truth;
};

SimResult generate_dataset(const SimConfig& config);

// Truth total at query points lying exactly on the generated grid.
Eigen::VectorXd oracle_predict(const SimResult& sim, const std::vector<QueryPoint>& queries);

// One draw from N(0, K) via jittered Cholesky.
Eigen::VectorXd sample_gp(const Eigen::MatrixXd& K, Rng& rng);

}  // namespace trc
