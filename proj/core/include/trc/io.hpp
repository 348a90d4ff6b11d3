#pragma once

#include <string>
#include <vector>

#include "trc/covariance.hpp"
#include "trc/data.hpp"
#include "trc/inference.hpp"
#include "trc/parametric.hpp"
#include "trc/simdata.hpp"

namespace trc {

// Reads `patient_id,time_h,glucose` and `patient_id,time_h,carbs_g,fat_g[,..._g]`.
// Patients come out sorted by id, observations by time; duplicate or
// non-increasing timestamps and negative dosages are rejected.
Dataset read_dataset(const std::string& glucose_csv, const std::string& meals_csv);

void write_glucose_csv(const std::string& path, const Dataset& data);
void write_meals_csv(const std::string& path, const Dataset& data);

// `patient_id,time_h,baseline,comp_1,...,comp_Q,total` on the simulation grid.
void write_truth_csv(const std::string& path, const SimResult& sim);

// Everything `fit` produces and `predict`/`evaluate` consume.
struct FittedModel {
  ModelKind kind = ModelKind::GpResp;
  std::vector<std::string> patient_ids;
  std::vector<std::string> components;
  GridPoint grid;
  CenterTransform transform;
  ModelParams gp;      // GP kinds
  BellParams bell;     // parametric kinds
  FitDiagnostics diagnostics;
  double train_hours = 48.0;
};

void save_fitted_model(const std::string& path, const FittedModel& model);
FittedModel load_fitted_model(const std::string& path);

GridPoint load_grid_point(const std::string& path);
void save_grid_point(const std::string& path, const GridPoint& point, ModelKind kind);

// Axis overrides for the hyperparameter search, e.g.
// {"window": [2.5, 3.0], "driving_lengthscale": [0.3]}.
struct HyperGrid;  // training.hpp
HyperGrid load_hyper_grid(const std::string& path);

std::string format_double(double value);  // shortest round-trip formatting

}  // namespace trc
