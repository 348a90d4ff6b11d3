#include "trc/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trc/errors.hpp"
#include "trc/optim.hpp"
#include "trc/rng.hpp"

namespace trc {

std::vector<CvSplit> make_forward_chaining_splits(const Dataset& data, int n_folds,
                                                  double window_begin, double train_hours) {
  if (n_folds < 2) throw ConfigError("forward-chaining CV needs at least 2 folds");
  if (!(train_hours > 0.0)) throw ConfigError("forward-chaining CV: non-positive window");
  const double window_end = window_begin + train_hours;
  const double fold_hours = train_hours / n_folds;

  const std::vector<RowInfo> rows = flatten_rows(data);
  std::vector<std::vector<int>> fold_rows(n_folds);
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    const double t = rows[r].time;
    if (t < window_begin || t >= window_end) {
      throw DataError("forward-chaining CV: observation at t=" + std::to_string(t) +
                      " lies outside the training window");
    }
    int f = static_cast<int>((t - window_begin) / fold_hours);
    f = std::min(f, n_folds - 1);
    fold_rows[f].push_back(r);
  }
  for (int f = 0; f < n_folds; ++f) {
    if (fold_rows[f].empty()) {
      throw DataError("forward-chaining CV: fold " + std::to_string(f + 1) +
                      " holds no observations");
    }
  }

  std::vector<CvSplit> splits;
  splits.reserve(n_folds - 1);
  for (int k = 1; k < n_folds; ++k) {
    CvSplit s;
    s.index = k;
    s.train_begin = window_begin;
    s.train_end = window_begin + k * fold_hours;
    s.validate_end = window_begin + (k + 1) * fold_hours;
    for (int f = 0; f < k; ++f) {
      s.train_rows.insert(s.train_rows.end(), fold_rows[f].begin(), fold_rows[f].end());
    }
    s.validate_rows = fold_rows[k];
    splits.push_back(std::move(s));
  }
  return splits;
}

std::vector<GridPoint> enumerate_grid(const HyperGrid& grid, ModelKind kind,
                                      int num_components) {
  auto sorted = [](std::vector<double> v, const char* name) {
    if (v.empty()) throw ConfigError(std::string("hyper grid: empty axis ") + name);
    for (double x : v) {
      if (!(x > 0.0)) throw ConfigError(std::string("hyper grid: non-positive value on ") + name);
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto windows = sorted(grid.window, "window");
  const auto driving = sorted(grid.driving_lengthscale, "driving_lengthscale");
  const auto baseline = sorted(grid.baseline_lengthscale, "baseline_lengthscale");
  const bool has_secondary = kind != ModelKind::GpConv && num_components > 1;
  const auto secondary =
      has_secondary ? sorted(grid.secondary_lengthscale, "secondary_lengthscale")
                    : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};

  std::vector<GridPoint> points;
  points.reserve(windows.size() * driving.size() * secondary.size() * baseline.size());
  for (double w : windows) {
    for (double d : driving) {
      for (double s : secondary) {
        for (double b : baseline) {
          points.push_back({w, d, s, b});
        }
      }
    }
  }
  return points;
}

namespace {

// Log-space view over the continuously optimized parameters of one model
// kind; grid-fixed values never enter the vector.
struct GpPacker {
  ModelKind kind;
  int patients;
  int components;
  int blocks;

  int dim() const {
    int d = 2 + patients * components + blocks;  // v_b, sigma_y^2, b_iq, kappa
    if (kind == ModelKind::GpLfm) d += 2 * components;
    if (kind == ModelKind::GpConv) d += 2 * (components - 1);
    return d;
  }

  Eigen::VectorXd pack(const ModelParams& p) const {
    Eigen::VectorXd x(dim());
    int at = 0;
    x[at++] = std::log(p.baseline.variance);
    x[at++] = std::log(p.noise_variance);
    for (int i = 0; i < patients; ++i) {
      for (int q = 0; q < components; ++q) x[at++] = std::log(p.coreg.weights(i, q));
    }
    for (int b = 0; b < blocks; ++b) x[at++] = std::log(p.coreg.meal_noise[b]);
    if (kind == ModelKind::GpLfm) {
      for (int q = 0; q < components; ++q) x[at++] = std::log(p.decay[q]);
      for (int q = 0; q < components; ++q) x[at++] = std::log(p.sensitivity[q]);
    }
    if (kind == ModelKind::GpConv) {
      for (int q = 0; q < components - 1; ++q) x[at++] = std::log(p.shift_per_gram[q]);
      for (int q = 0; q < components - 1; ++q) x[at++] = std::log(p.spread_per_gram[q]);
    }
    return x;
  }

  void unpack(const Eigen::VectorXd& x, ModelParams& p) const {
    int at = 0;
    p.baseline.variance = std::exp(x[at++]);
    p.noise_variance = std::exp(x[at++]);
    for (int i = 0; i < patients; ++i) {
      for (int q = 0; q < components; ++q) p.coreg.weights(i, q) = std::exp(x[at++]);
    }
    for (int b = 0; b < blocks; ++b) p.coreg.meal_noise[b] = std::exp(x[at++]);
    if (kind == ModelKind::GpLfm) {
      for (int q = 0; q < components; ++q) p.decay[q] = std::exp(x[at++]);
      for (int q = 0; q < components; ++q) p.sensitivity[q] = std::exp(x[at++]);
    }
    if (kind == ModelKind::GpConv) {
      for (int q = 0; q < components - 1; ++q) p.shift_per_gram[q] = std::exp(x[at++]);
      for (int q = 0; q < components - 1; ++q) p.spread_per_gram[q] = std::exp(x[at++]);
    }
  }
};

}  // namespace

FitResult fit_continuous(const Dataset& train, ModelKind kind, const GridPoint& point,
                         const FitOptions& options) {
  if (!is_gp_model(kind)) {
    throw ConfigError("fit_continuous applies to GP models; use fit_parametric_map");
  }
  train.validate();
  const int patients = train.num_patients();
  const int components = train.num_components();

  ModelParams params = default_params(kind, patients, components);
  params.apply_grid(point);
  const GpPacker packer{kind, patients, components, params.num_response_blocks()};
  const Eigen::VectorXd start = packer.pack(params);
  const Eigen::VectorXd y = flatten_values(train);

  const auto objective = [&](const Eigen::VectorXd& x) {
    ModelParams candidate = params;
    packer.unpack(x, candidate);
    try {
      const CovarianceBundle bundle = assemble_total_cov(train, candidate);
      return -log_marginal_likelihood(bundle.total, y, candidate.noise_variance);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  NelderMeadOptions nm;
  nm.max_evals = options.max_evals > 0 ? options.max_evals
                                       : std::min(100 * packer.dim(), 3000);

  const double initial = -objective(start);
  if (!std::isfinite(initial)) {
    throw NumericalError("fit_continuous: log marginal likelihood not finite at defaults");
  }

  Rng rng(options.seed ^ 0xd1b54a32d192ed03ull);
  bool have_best = false;
  double best_f = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  std::string diagnostics_log;
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd x0 = start;
    if (r > 0) {
      for (Eigen::Index k = 0; k < x0.size(); ++k) x0[k] += std::log(rng.uniform(0.5, 2.0));
    }
    try {
      const NelderMeadResult run = nelder_mead(objective, x0, nm);
      if (run.fx < best_f) {
        best_f = run.fx;
        best_x = run.x;
        have_best = true;
      }
      diagnostics_log += "restart " + std::to_string(r) + ": lml=" +
                         std::to_string(-run.fx) + "; ";
    } catch (const std::exception& e) {
      diagnostics_log += "restart " + std::to_string(r) + ": " + e.what() + "; ";
    }
  }
  if (!have_best) {
    throw NumericalError("fit_continuous: every restart failed (" + diagnostics_log + ")");
  }

  FitResult result;
  result.params = params;
  packer.unpack(best_x, result.params);
  result.initial_log_marginal = initial;

  const CovarianceBundle bundle = assemble_total_cov(train, result.params);
  const Factorization factor = stable_factorize(bundle.total, result.params.noise_variance);
  result.diagnostics.jitter = factor.jitter();
  result.diagnostics.condition = factor.condition();
  result.diagnostics.log_marginal = log_marginal_likelihood(factor, y);
  return result;
}

namespace {

double validation_rmse(const Dataset& train_window, const CvSplit& split,
                       const ModelParams& params) {
  const std::vector<RowInfo> rows = flatten_rows(train_window);
  const Dataset fit_data =
      filter_observations(train_window, split.train_begin, split.train_end);
  const CovarianceBundle bundle = assemble_total_cov(fit_data, params);
  const Factorization factor = stable_factorize(bundle.total, params.noise_variance);
  const Eigen::VectorXd alpha = factor.solve(flatten_values(fit_data));

  std::vector<QueryPoint> queries;
  Eigen::VectorXd actual(static_cast<Eigen::Index>(split.validate_rows.size()));
  for (std::size_t k = 0; k < split.validate_rows.size(); ++k) {
    const RowInfo& row = rows[static_cast<std::size_t>(split.validate_rows[k])];
    queries.push_back({row.patient, row.time});
    actual[static_cast<Eigen::Index>(k)] =
        train_window.patients[row.patient].values[row.obs];
  }
  const Eigen::MatrixXd cross =
      cross_cov(fit_data, params, queries, CovPart::Total, 0, &train_window);
  const Eigen::VectorXd mean = cross * alpha;
  return std::sqrt((actual - mean).array().square().mean());
}

}  // namespace

GridSearchResult grid_search(const Dataset& train, const HyperGrid& grid, ModelKind kind,
                             int n_folds, double train_hours, const FitOptions& options) {
  train.validate();
  double window_begin = std::numeric_limits<double>::infinity();
  for (const auto& p : train.patients) {
    if (!p.times.empty()) window_begin = std::min(window_begin, p.times.front());
  }
  if (!std::isfinite(window_begin)) throw DataError("grid_search: dataset has no observations");

  const std::vector<CvSplit> splits =
      make_forward_chaining_splits(train, n_folds, window_begin, train_hours);
  const std::vector<GridPoint> points = enumerate_grid(grid, kind, train.num_components());

  GridSearchResult result;
  result.scores.reserve(points.size());
  for (const GridPoint& point : points) {
    GridScore score;
    score.point = point;
    try {
      for (const CvSplit& split : splits) {
        const Dataset fit_data =
            filter_observations(train, split.train_begin, split.train_end);
        const FitResult fit = fit_continuous(fit_data, kind, point, options);
        score.split_rmse.push_back(validation_rmse(train, split, fit.params));
      }
      score.mean_rmse = 0.0;
      for (double r : score.split_rmse) score.mean_rmse += r;
      score.mean_rmse /= static_cast<double>(score.split_rmse.size());
    } catch (const std::exception& e) {
      score.failed = true;
      score.error = e.what();
    }
    result.scores.push_back(std::move(score));
  }

  for (int i = 0; i < static_cast<int>(result.scores.size()); ++i) {
    const GridScore& s = result.scores[i];
    if (s.failed) continue;
    if (result.best < 0 || s.mean_rmse < result.scores[result.best].mean_rmse) {
      result.best = i;
    }
  }
  if (result.best < 0) {
    throw NumericalError("grid_search: every grid point failed");
  }
  return result;
}

}  // namespace trc
