#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trc/covariance.hpp"
#include "trc/data.hpp"
#include "trc/inference.hpp"

namespace trc {

// One forward-chaining split: train on folds 1..k, validate on fold k+1.
struct CvSplit {
  int index = 0;
  double train_begin = 0.0;
  double train_end = 0.0;     // == validate_begin
  double validate_end = 0.0;
  std::vector<int> train_rows;     // flattened row indices
  std::vector<int> validate_rows;
};

// Equal-duration folds over [window_begin, window_begin + train_hours),
// yielding n_folds - 1 splits. Throws when a fold holds no observations.
std::vector<CvSplit> make_forward_chaining_splits(const Dataset& data, int n_folds,
                                                  double window_begin, double train_hours);

struct HyperGrid {
  std::vector<double> window = {2.5, 3.0, 3.5};
  std::vector<double> driving_lengthscale = {0.25, 0.3, 0.35, 0.4};
  std::vector<double> secondary_lengthscale = {0.7, 0.75, 0.8, 0.85};
  std::vector<double> baseline_lengthscale = {5.0, 10.0, 15.0};
};

// Cartesian product of the applicable axes; the secondary axis is skipped
// for GP-Conv (and for single-component data).
std::vector<GridPoint> enumerate_grid(const HyperGrid& grid, ModelKind kind,
                                      int num_components);

struct FitOptions {
  int restarts = 3;
  int max_evals = 0;  // 0 = scaled by parameter count
  std::uint64_t seed = 0;
};

struct FitResult {
  ModelParams params;
  FitDiagnostics diagnostics;
  double initial_log_marginal = 0.0;
};

// Maximizes the log marginal likelihood over log-transformed positive
// parameters with a simplex search restarted from perturbed defaults.
// Grid-fixed values in `point` are not optimized.
FitResult fit_continuous(const Dataset& train, ModelKind kind, const GridPoint& point,
                         const FitOptions& options = {});

struct GridScore {
  GridPoint point;
  std::vector<double> split_rmse;
  double mean_rmse = 0.0;
  bool failed = false;
  std::string error;
};

struct GridSearchResult {
  std::vector<GridScore> scores;
  int best = -1;
  const GridScore& best_score() const { return scores.at(best); }
};

// Scores every grid point by mean validation RMSE over the forward-chaining
// splits; ties break toward the smaller window, then smaller lengthscales.
GridSearchResult grid_search(const Dataset& train, const HyperGrid& grid, ModelKind kind,
                             int n_folds = 4, double train_hours = 48.0,
                             const FitOptions& options = {});

}  // namespace trc
