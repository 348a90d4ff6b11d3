#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "trc/covariance.hpp"
#include "trc/data.hpp"

namespace trc {

// Bell-curve response parameters for the hierarchical parametric models.
// P-Resp keeps an independent width per (patient, component); P-IDR ties
// the widths of secondary components to the driving one through global
// coupling coefficients.
struct BellParams {
  ModelKind kind = ModelKind::PResp;
  Eigen::MatrixXd magnitude;       // beta_iq, patients x components
  Eigen::MatrixXd width;           // l_iq (hours); P-IDR uses column 0 only
  Eigen::VectorXd width_coupling;  // c_q for the secondary components (P-IDR)
  // Shared log-normal hyperparameters, per component.
  Eigen::VectorXd mag_log_mean, mag_log_sd;
  Eigen::VectorXd width_log_mean, width_log_sd;
  double noise_variance = 0.1;

  double width_of(int patient, int component) const;
  void validate(int num_patients, int num_components) const;
};

// h * exp(-0.5 (t - meal_time - 3 l)^2 / l^2): peak h at meal_time + 3 l.
double bell_response(double time, double meal_time, double height, double width);

// Summed bell responses over all meals of one patient (centered scale).
Eigen::VectorXd parametric_response(const std::vector<double>& times,
                                    const std::vector<MealEvent>& meals,
                                    const BellParams& params, int patient);

// Per-component response of one meal at the given times.
Eigen::VectorXd parametric_component_response(const std::vector<double>& times,
                                              const MealEvent& meal, const BellParams& params,
                                              int patient, int component);

BellParams default_bell_params(ModelKind kind, int num_patients, int num_components);

struct ParametricFitOptions {
  int restarts = 3;
  int max_evals = 0;  // 0 = scaled by dimension
  std::uint64_t seed = 0;
};

struct ParametricFitResult {
  BellParams params;
  double objective = 0.0;  // penalized log posterior at the optimum
  double initial_objective = 0.0;
};

// Empirical-Bayes MAP: Gaussian likelihood plus log-normal hierarchical
// priors on magnitudes and widths, hyperparameters fitted jointly.
ParametricFitResult fit_parametric_map(const Dataset& train, ModelKind kind,
                                       const ParametricFitOptions& options = {});

}  // namespace trc
