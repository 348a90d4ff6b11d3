#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "trc/data.hpp"
#include "trc/kernels.hpp"

namespace trc {

enum class ModelKind { GpResp, GpLfm, GpConv, PResp, PIdr };

const char* model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);
bool is_gp_model(ModelKind kind);

// Grid-fixed hyperparameters selected by cross-validation. The secondary
// lengthscale applies to GP-Resp and GP-LFM only and is NaN otherwise.
struct GridPoint {
  double window = 3.0;
  double driving_lengthscale = 0.3;
  double secondary_lengthscale = 0.8;
  double baseline_lengthscale = 10.0;
};

struct BaselineParams {
  double lengthscale = 10.0;
  double variance = 0.5;
};

// Coregionalization weights b_iq (patients x components) and the per-meal
// independent response variance kappa_q. GP-Conv has a single response
// block and uses meal_noise[0].
struct CoregParams {
  Eigen::MatrixXd weights;
  Eigen::VectorXd meal_noise;
};

// Everything one model kind needs to evaluate covariances. The grid-fixed
// part (window, lengthscales, baseline.lengthscale) comes from a GridPoint;
// the rest is continuously optimized.
struct ModelParams {
  ModelKind kind = ModelKind::GpResp;
  double window = 3.0;  // effect window T, hours
  BaselineParams baseline;
  CoregParams coreg;
  std::vector<double> lengthscales;     // per component; [0] is the GP-Conv latent l
  std::vector<double> decay;            // GP-LFM, per component
  std::vector<double> sensitivity;      // GP-LFM, per component
  std::vector<double> shift_per_gram;   // GP-Conv, secondary components
  std::vector<double> spread_per_gram;  // GP-Conv, secondary components
  double noise_variance = 0.1;
  int lfm_quad_nodes = 32;

  // GP-Resp and GP-LFM decompose into one response block per component;
  // GP-Conv couples all components into a single block.
  int num_response_blocks() const;

  TlseParams tlse(int q) const;
  LfmParams lfm(int q) const;
  ConvFilterParams conv() const;

  void apply_grid(const GridPoint& point);
  void validate(int num_patients, int num_components) const;
};

// Sized defaults for a model kind (optimizer starting values).
ModelParams default_params(ModelKind kind, int num_patients, int num_components);

// Elementwise tau_k - t_meal.
Eigen::VectorXd relative_times(const std::vector<double>& obs_times, double meal_time);

// Coregionalized response covariance between two observations for one
// response block, summing over in-window meal pairs of their patients.
double response_cross_cov(const Dataset& data, const ModelParams& params, int patient_a,
                          double time_a, int patient_b, double time_b, int block);

// Per-patient SE baseline: block-diagonal across patients.
double baseline_cov(const BaselineParams& params, int patient_a, double time_a, int patient_b,
                    double time_b);

struct CovarianceBundle {
  std::vector<RowInfo> rows;
  Eigen::MatrixXd baseline;
  std::vector<Eigen::MatrixXd> component;
  Eigen::MatrixXd total;  // baseline + sum of components, noise excluded
};

CovarianceBundle assemble_total_cov(const Dataset& data, const ModelParams& params);

enum class CovPart { Baseline, Component, Total };

struct QueryPoint {
  int patient = 0;
  double time = 0.0;
};

// Rectangular K_part(X*, X) between query points and the training rows.
// Query-side relative times use `query_context` meals when given (same
// patients as `train`), the training meals otherwise.
Eigen::MatrixXd cross_cov(const Dataset& train, const ModelParams& params,
                          const std::vector<QueryPoint>& queries, CovPart part, int block = 0,
                          const Dataset* query_context = nullptr);

// K_part(X*, X*) under the same entry rules.
Eigen::MatrixXd query_prior_cov(const Dataset& train, const ModelParams& params,
                                const std::vector<QueryPoint>& queries, CovPart part,
                                int block = 0, const Dataset* query_context = nullptr);

}  // namespace trc
