#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "trc/errors.hpp"
#include "trc/inference.hpp"
#include "trc/io.hpp"
#include "trc/metrics.hpp"
#include "trc/parametric.hpp"
#include "trc/simdata.hpp"
#include "trc/svg.hpp"
#include "trc/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string model = "gp-resp";
  std::string glucose_path;
  std::string meals_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  std::string center = "mean";
  double train_hours = 48.0;
};

trc::Centering parse_centering(const std::string& mode) {
  if (mode == "mean") return trc::Centering::Mean;
  if (mode == "zscore") return trc::Centering::ZScore;
  throw trc::ConfigError("unknown centering mode '" + mode + "'");
}

void ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw trc::ConfigError("--out directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw trc::ConfigError("cannot create output directory " + dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw trc::DataError("cannot create file " + path.string());
  return out;
}

// ------------------------------ simulate -------------------------------

trc::SimConfig sim_config_from_json(const std::string& path, trc::SimConfig base) {
  std::ifstream in(path);
  if (!in) throw trc::DataError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw trc::ConfigError(path + ": invalid JSON (" + e.what() + ")");
  }
  try {
    base.patients = j.value("patients", base.patients);
    base.days = j.value("days", base.days);
    base.grid_minutes = j.value("grid_minutes", base.grid_minutes);
    if (j.contains("meals_per_day")) {
      base.meals_per_day_min = j["meals_per_day"].at(0).get<int>();
      base.meals_per_day_max = j["meals_per_day"].at(1).get<int>();
    }
    base.noise_sd = j.value("noise_sd", base.noise_sd);
    base.basal_mean = j.value("basal_mean", base.basal_mean);
    base.basal_sd = j.value("basal_sd", base.basal_sd);
    if (j.contains("model")) base.kind = trc::parse_model_kind(j["model"].get<std::string>());
    base.seed = j.value("seed", base.seed);
    if (j.contains("components")) {
      base.components.clear();
      for (const auto& c : j["components"]) {
        base.components.push_back({c.at("name").get<std::string>(),
                                   c.at("median_g").get<double>(),
                                   c.value("sdlog", 0.4)});
      }
    }
  } catch (const json::exception& e) {
    throw trc::ConfigError(path + ": malformed simulation config (" + std::string(e.what()) +
                           ")");
  }
  return base;
}

int run_simulate(const CommonArgs& common, const trc::SimConfig& cfg) {
  ensure_out_dir(common.out_dir);
  const trc::SimResult sim = trc::generate_dataset(cfg);
  const fs::path dir(common.out_dir);
  trc::write_glucose_csv((dir / "glucose.csv").string(), sim.data);
  trc::write_meals_csv((dir / "meals.csv").string(), sim.data);
  trc::write_truth_csv((dir / "truth.csv").string(), sim);
  std::cout << "simulate: wrote " << sim.data.total_observations() << " observations for "
            << sim.data.num_patients() << " patients under " << common.out_dir << "\n";
  return 0;
}

// ------------------------------ fit ------------------------------------

struct LoadedData {
  trc::Dataset raw;
  trc::Dataset centered;
  trc::Dataset train;  // centered, observations before train_hours
  trc::CenterTransform transform;
};

LoadedData load_and_center(const CommonArgs& common) {
  LoadedData d;
  d.raw = trc::read_dataset(common.glucose_path, common.meals_path);
  d.transform = trc::fit_centering(d.raw, parse_centering(common.center), common.train_hours);
  d.centered = trc::apply_centering(d.raw, d.transform);
  d.train = trc::filter_observations(d.centered, -std::numeric_limits<double>::infinity(),
                                     common.train_hours);
  return d;
}

void write_train_audit(const fs::path& path, const trc::Dataset& train, double train_hours) {
  std::ofstream out = open_out(path);
  out << "row,patient_id,time_h\n";
  const auto rows = trc::flatten_rows(train);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].time >= train_hours) {
      throw trc::DataError("training audit: observation beyond the training window");
    }
    out << r << ',' << train.patients[rows[r].patient].id << ','
        << trc::format_double(rows[r].time) << '\n';
  }
}

int run_fit(const CommonArgs& common, const std::string& fixed_path, int restarts,
            int max_evals) {
  ensure_out_dir(common.out_dir);
  const trc::ModelKind kind = trc::parse_model_kind(common.model);
  const LoadedData data = load_and_center(common);
  const fs::path dir(common.out_dir);
  write_train_audit(dir / "train_audit.csv", data.train, common.train_hours);

  trc::FittedModel model;
  model.kind = kind;
  model.components = data.raw.components;
  model.train_hours = common.train_hours;
  model.transform = data.transform;
  for (const auto& p : data.raw.patients) model.patient_ids.push_back(p.id);

  trc::GridPoint point;
  if (!fixed_path.empty()) {
    point = trc::load_grid_point(fixed_path);
  } else if (kind == trc::ModelKind::GpConv) {
    point.secondary_lengthscale = std::numeric_limits<double>::quiet_NaN();
  }
  model.grid = point;

  if (trc::is_gp_model(kind)) {
    trc::FitOptions opts;
    opts.restarts = restarts;
    opts.max_evals = max_evals;
    opts.seed = common.seed;
    const trc::FitResult fit = trc::fit_continuous(data.train, kind, point, opts);
    model.gp = fit.params;
    model.diagnostics = fit.diagnostics;

    const trc::CovarianceBundle bundle = trc::assemble_total_cov(data.train, fit.params);
    std::ofstream svg_out = open_out(dir / "covariance_total.svg");
    svg_out << trc::svg::render_heatmap(bundle.total,
                                        std::string("K total (") + common.model + ")");
  } else {
    trc::ParametricFitOptions opts;
    opts.restarts = restarts;
    opts.max_evals = max_evals;
    opts.seed = common.seed;
    const trc::ParametricFitResult fit = trc::fit_parametric_map(data.train, kind, opts);
    model.bell = fit.params;
    model.diagnostics.log_marginal = fit.objective;
  }

  trc::save_fitted_model((dir / "params.json").string(), model);
  std::cout << "fit: model " << common.model << ", objective "
            << trc::format_double(model.diagnostics.log_marginal) << ", params written to "
            << (dir / "params.json").string() << "\n";
  return 0;
}

// ------------------------------ cv -------------------------------------

int run_cv(const CommonArgs& common, const std::string& grid_path, int folds, int restarts,
           int max_evals) {
  ensure_out_dir(common.out_dir);
  const trc::ModelKind kind = trc::parse_model_kind(common.model);
  if (!trc::is_gp_model(kind)) {
    throw trc::ConfigError("cv applies to the GP models; parametric kinds have no grid");
  }
  const LoadedData data = load_and_center(common);

  trc::HyperGrid grid;
  if (!grid_path.empty()) grid = trc::load_hyper_grid(grid_path);
  trc::FitOptions opts;
  opts.restarts = restarts;
  opts.max_evals = max_evals;
  opts.seed = common.seed;

  const trc::GridSearchResult result =
      trc::grid_search(data.train, grid, kind, folds, common.train_hours, opts);

  const fs::path dir(common.out_dir);
  std::ofstream out = open_out(dir / "cv_scores.csv");
  out << "window,driving_lengthscale,secondary_lengthscale,baseline_lengthscale,mean_rmse,"
         "status";
  for (int s = 1; s < folds; ++s) out << ",rmse_split_" << s;
  out << '\n';
  for (const auto& score : result.scores) {
    out << trc::format_double(score.point.window) << ','
        << trc::format_double(score.point.driving_lengthscale) << ','
        << (std::isfinite(score.point.secondary_lengthscale)
                ? trc::format_double(score.point.secondary_lengthscale)
                : "")
        << ',' << trc::format_double(score.point.baseline_lengthscale) << ','
        << (score.failed ? "" : trc::format_double(score.mean_rmse)) << ','
        << (score.failed ? "failed" : "ok");
    for (int s = 1; s < folds; ++s) {
      out << ',';
      if (!score.failed && s <= static_cast<int>(score.split_rmse.size())) {
        out << trc::format_double(score.split_rmse[static_cast<std::size_t>(s - 1)]);
      }
    }
    out << '\n';
  }
  trc::save_grid_point((dir / "selected.json").string(), result.best_score().point, kind);
  std::cout << "cv: scored " << result.scores.size() << " grid points; best mean RMSE "
            << trc::format_double(result.best_score().mean_rmse) << "\n";
  return 0;
}

// ------------------------------ predict --------------------------------

struct PredictionSet {
  std::vector<trc::QueryPoint> queries;
  trc::PosteriorDecomposition post;  // centered scale
};

PredictionSet make_predictions(const trc::FittedModel& model, const LoadedData& data,
                               double from_hours) {
  PredictionSet out;
  for (int i = 0; i < data.centered.num_patients(); ++i) {
    for (double t : data.centered.patients[i].times) {
      if (t >= from_hours) out.queries.push_back({i, t});
    }
  }
  if (out.queries.empty()) {
    throw trc::DataError("no observations at or after hour " +
                         trc::format_double(from_hours) + " to predict");
  }

  if (trc::is_gp_model(model.kind)) {
    out.post = trc::predict(data.train, model.gp, out.queries);
    return out;
  }

  // Parametric decomposition: deterministic bells on a flat baseline.
  const auto n = static_cast<Eigen::Index>(out.queries.size());
  const int components = data.centered.num_components();
  out.post.queries = out.queries;
  out.post.noise_variance = model.bell.noise_variance;
  out.post.total_mean = Eigen::VectorXd::Zero(n);
  out.post.total_var = Eigen::VectorXd::Zero(n);
  out.post.total_var_noisy = Eigen::VectorXd::Constant(n, model.bell.noise_variance);
  out.post.baseline_mean = Eigen::VectorXd::Zero(n);
  out.post.baseline_var = Eigen::VectorXd::Zero(n);
  out.post.component_mean.assign(components, Eigen::VectorXd::Zero(n));
  out.post.component_var.assign(components, Eigen::VectorXd::Zero(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& qp = out.queries[static_cast<std::size_t>(k)];
    const std::vector<double> time = {qp.time};
    for (const auto& meal : data.centered.patients[qp.patient].meals) {
      for (int q = 0; q < components; ++q) {
        out.post.component_mean[q][k] +=
            trc::parametric_component_response(time, meal, model.bell, qp.patient, q)[0];
      }
    }
    for (int q = 0; q < components; ++q) out.post.total_mean[k] += out.post.component_mean[q][k];
  }
  return out;
}

void write_predictions_csv(const fs::path& path, const trc::FittedModel& model,
                           const LoadedData& data, const PredictionSet& set) {
  std::ofstream out = open_out(path);
  const auto blocks = set.post.component_mean.size();
  out << "patient_id,time_h,total_mean,total_sd,baseline_mean";
  for (std::size_t b = 0; b < blocks; ++b) out << ",comp_" << (b + 1) << "_mean";
  out << '\n';
  for (std::size_t k = 0; k < set.queries.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    const int patient = set.queries[k].patient;
    const double total =
        trc::uncenter_value(model.transform, patient, set.post.total_mean[row]);
    const double sd = trc::uncenter_spread(model.transform, patient,
                                           std::sqrt(set.post.total_var_noisy[row]));
    const double baseline =
        trc::uncenter_value(model.transform, patient, set.post.baseline_mean[row]);
    out << data.raw.patients[patient].id << ',' << trc::format_double(set.queries[k].time)
        << ',' << trc::format_double(total) << ',' << trc::format_double(sd) << ','
        << trc::format_double(baseline);
    for (std::size_t b = 0; b < blocks; ++b) {
      out << ','
          << trc::format_double(trc::uncenter_spread(model.transform, patient,
                                                     set.post.component_mean[b][row]));
    }
    out << '\n';
  }
}

void write_decomposition_svgs(const fs::path& dir, const trc::FittedModel& model,
                              const LoadedData& data, const PredictionSet& set,
                              double from_hours) {
  const char* palette[] = {"#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  for (int i = 0; i < data.raw.num_patients(); ++i) {
    trc::svg::Chart chart;
    chart.title = "Decomposed prediction, patient " + data.raw.patients[i].id + " (" +
                  trc::model_kind_name(model.kind) + ")";
    chart.x_label = "time [h]";
    chart.y_label = "glucose";

    trc::svg::Band band;
    band.color = "#1f77b4";
    trc::svg::Series total{{}, {}, "#1f77b4", "total mean", 2.0, false};
    trc::svg::Series baseline{{}, {}, "#7f7f7f", "baseline", 1.5, true};
    std::vector<trc::svg::Series> comps;
    for (std::size_t b = 0; b < set.post.component_mean.size(); ++b) {
      const std::string label =
          model.kind == trc::ModelKind::GpConv
              ? "joint response"
              : model.components[std::min(b, model.components.size() - 1)] + " response";
      comps.push_back({{}, {}, palette[b % 4], label, 1.5, false});
    }

    for (std::size_t k = 0; k < set.queries.size(); ++k) {
      if (set.queries[k].patient != i) continue;
      const auto row = static_cast<Eigen::Index>(k);
      const double t = set.queries[k].time;
      const double mean = trc::uncenter_value(model.transform, i, set.post.total_mean[row]);
      const double sd = trc::uncenter_spread(model.transform, i,
                                             std::sqrt(set.post.total_var_noisy[row]));
      band.x.push_back(t);
      band.lower.push_back(mean - 2.0 * sd);
      band.upper.push_back(mean + 2.0 * sd);
      total.x.push_back(t);
      total.y.push_back(mean);
      baseline.x.push_back(t);
      baseline.y.push_back(trc::uncenter_value(model.transform, i, set.post.baseline_mean[row]));
      for (std::size_t b = 0; b < comps.size(); ++b) {
        comps[b].x.push_back(t);
        // Responses ride on the patient offset so they share the plot scale.
        comps[b].y.push_back(trc::uncenter_value(
            model.transform, i, set.post.component_mean[b][row]));
      }
    }
    if (total.x.empty()) continue;

    trc::svg::Points observed;
    observed.color = "#333333";
    for (std::size_t k = 0; k < data.raw.patients[i].times.size(); ++k) {
      if (data.raw.patients[i].times[k] >= from_hours) {
        observed.x.push_back(data.raw.patients[i].times[k]);
        observed.y.push_back(data.raw.patients[i].values[k]);
      }
    }

    trc::svg::VerticalMarkers meals;
    meals.label = "meals";
    for (const auto& meal : data.raw.patients[i].meals) {
      if (meal.time >= from_hours - 3.0) meals.x.push_back(meal.time);
    }

    chart.bands.push_back(std::move(band));
    chart.series.push_back(std::move(total));
    chart.series.push_back(std::move(baseline));
    for (auto& c : comps) chart.series.push_back(std::move(c));
    chart.points.push_back(std::move(observed));
    chart.markers.push_back(std::move(meals));

    std::ofstream out = open_out(dir / ("decomposition_" + data.raw.patients[i].id + ".svg"));
    out << trc::svg::render_chart(chart);
  }
}

LoadedData load_for_model(const trc::FittedModel& model, const CommonArgs& common) {
  LoadedData data;
  data.raw = trc::read_dataset(common.glucose_path, common.meals_path);
  if (static_cast<int>(model.patient_ids.size()) != data.raw.num_patients()) {
    throw trc::DataError("fitted model covers a different patient set than the data");
  }
  for (int i = 0; i < data.raw.num_patients(); ++i) {
    if (model.patient_ids[static_cast<std::size_t>(i)] != data.raw.patients[i].id) {
      throw trc::DataError("patient mismatch: model has " +
                           model.patient_ids[static_cast<std::size_t>(i)] + ", data has " +
                           data.raw.patients[i].id);
    }
  }
  if (model.components != data.raw.components) {
    throw trc::DataError("fitted model components differ from the meals file");
  }
  // Reuse the transform fitted at training time.
  data.transform = model.transform;
  data.centered = trc::apply_centering(data.raw, model.transform);
  data.train = trc::filter_observations(data.centered,
                                        -std::numeric_limits<double>::infinity(),
                                        model.train_hours);
  return data;
}

int run_predict(const CommonArgs& common, const std::string& params_path, double from_hours) {
  ensure_out_dir(common.out_dir);
  const trc::FittedModel model = trc::load_fitted_model(params_path);
  const LoadedData data = load_for_model(model, common);
  const double start = std::isnan(from_hours) ? model.train_hours : from_hours;
  const PredictionSet set = make_predictions(model, data, start);
  const fs::path dir(common.out_dir);
  write_predictions_csv(dir / "predictions.csv", model, data, set);
  write_decomposition_svgs(dir, model, data, set, start);
  std::cout << "predict: " << set.queries.size() << " rows written to "
            << (dir / "predictions.csv").string() << "\n";
  return 0;
}

// ------------------------------ evaluate -------------------------------

int run_evaluate(const CommonArgs& common, const std::string& params_path, double from_hours) {
  ensure_out_dir(common.out_dir);
  const trc::FittedModel model = trc::load_fitted_model(params_path);
  const LoadedData data = load_for_model(model, common);
  const double start = std::isnan(from_hours) ? model.train_hours : from_hours;
  const PredictionSet set = make_predictions(model, data, start);

  const auto n = static_cast<Eigen::Index>(set.queries.size());
  Eigen::VectorXd actual(n);
  std::vector<int> patient_of_point(set.queries.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& qp = set.queries[static_cast<std::size_t>(k)];
    const auto& rec = data.centered.patients[qp.patient];
    const auto it = std::lower_bound(rec.times.begin(), rec.times.end(), qp.time);
    actual[k] = rec.values[static_cast<std::size_t>(it - rec.times.begin())];
    patient_of_point[static_cast<std::size_t>(k)] = qp.patient;
  }

  std::vector<std::string> ids;
  for (const auto& p : data.raw.patients) ids.push_back(p.id);
  const trc::MetricReport report = trc::compute_metric_report(
      actual, set.post.total_mean, set.post.total_var_noisy, patient_of_point, ids);

  const fs::path dir(common.out_dir);
  std::ofstream out = open_out(dir / "metrics.txt");
  out << "model=" << trc::model_kind_name(model.kind) << '\n';
  out << "centering=" << (model.transform.mode == trc::Centering::Mean ? "mean" : "zscore")
      << '\n';
  out << "points=" << report.pooled.count << '\n';
  out << "pooled_rmse=" << trc::format_double(report.pooled.rmse) << '\n';
  out << "pooled_mae=" << trc::format_double(report.pooled.mae) << '\n';
  out << "pooled_mnll=" << trc::format_double(report.pooled.mnll) << '\n';
  out << "rmse_mean=" << trc::format_double(report.rmse_mean)
      << " rmse_se=" << trc::format_double(report.rmse_se) << '\n';
  out << "mae_mean=" << trc::format_double(report.mae_mean)
      << " mae_se=" << trc::format_double(report.mae_se) << '\n';
  out << "mnll_mean=" << trc::format_double(report.mnll_mean)
      << " mnll_se=" << trc::format_double(report.mnll_se) << '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& s = report.per_patient[i];
    out << "patient " << ids[i] << " rmse=" << trc::format_double(s.rmse)
        << " mae=" << trc::format_double(s.mae) << " mnll=" << trc::format_double(s.mnll)
        << " count=" << s.count << '\n';
  }
  std::cout << "evaluate: pooled rmse " << trc::format_double(report.pooled.rmse)
            << ", report written to " << (dir / "metrics.txt").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite treatment-response curve fitting for glucose/meal time series"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string config_path, grid_path, fixed_path, params_path;
  int folds = 4;
  int restarts = 3;
  int max_evals = 0;
  double from_hours = std::numeric_limits<double>::quiet_NaN();

  trc::SimConfig sim_cfg;

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic cohort with truth");
  simulate->add_option("--out", common.out_dir, "Output directory")->required();
  simulate->add_option("--model", common.model, "Generating model kind");
  simulate->add_option("--seed", common.seed, "Random seed");
  simulate->add_option("--patients", sim_cfg.patients, "Number of patients");
  simulate->add_option("--days", sim_cfg.days, "Days of data per patient");
  simulate->add_option("--grid-minutes", sim_cfg.grid_minutes, "Observation grid spacing");
  simulate->add_option("--meals-min", sim_cfg.meals_per_day_min, "Min meals per day");
  simulate->add_option("--meals-max", sim_cfg.meals_per_day_max, "Max meals per day");
  simulate->add_option("--noise-sd", sim_cfg.noise_sd, "Observation noise sd");
  simulate->add_option("--config", config_path, "JSON overrides for the full config");

  const auto add_data_flags = [&](CLI::App* cmd) {
    cmd->add_option("--glucose", common.glucose_path, "Glucose CSV")->required();
    cmd->add_option("--meals", common.meals_path, "Meals CSV")->required();
    cmd->add_option("--out", common.out_dir, "Output directory")->required();
  };

  auto* cv = app.add_subcommand("cv", "Forward-chaining grid search");
  cv->add_option("--model", common.model, "Model kind")->required();
  add_data_flags(cv);
  cv->add_option("--folds", folds, "CV folds (splits = folds-1)");
  cv->add_option("--seed", common.seed, "Random seed");
  cv->add_option("--center", common.center, "Centering: mean or zscore");
  cv->add_option("--grid", grid_path, "JSON grid override");
  cv->add_option("--train-hours", common.train_hours, "Training window length");
  cv->add_option("--restarts", restarts, "Optimizer restarts per fit");
  cv->add_option("--max-evals", max_evals, "Objective evaluation budget per restart");

  auto* fit = app.add_subcommand("fit", "Fit a model on the training window");
  fit->add_option("--model", common.model, "Model kind")->required();
  add_data_flags(fit);
  fit->add_option("--seed", common.seed, "Random seed");
  fit->add_option("--center", common.center, "Centering: mean or zscore");
  fit->add_option("--fixed", fixed_path, "Grid point JSON (e.g. cv's selected.json)");
  fit->add_option("--train-hours", common.train_hours, "Training window length");
  fit->add_option("--restarts", restarts, "Optimizer restarts");
  fit->add_option("--max-evals", max_evals, "Objective evaluation budget per restart");

  auto* predict = app.add_subcommand("predict", "Decomposed predictions and SVG plots");
  predict->add_option("--params", params_path, "Fitted model JSON")->required();
  add_data_flags(predict);
  predict->add_option("--from-hours", from_hours, "Predict observations from this hour on");

  auto* evaluate = app.add_subcommand("evaluate", "Metrics on the held-out period");
  evaluate->add_option("--params", params_path, "Fitted model JSON")->required();
  add_data_flags(evaluate);
  evaluate->add_option("--from-hours", from_hours, "Evaluate observations from this hour on");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << R"({"error":{"category":"config","message":")" << e.what() << R"("}})"
              << "\n";
    return 2;
  }

  try {
    if (simulate->parsed()) {
      sim_cfg.seed = common.seed;
      sim_cfg.kind = trc::parse_model_kind(common.model);
      if (!config_path.empty()) sim_cfg = sim_config_from_json(config_path, sim_cfg);
      return run_simulate(common, sim_cfg);
    }
    if (cv->parsed()) return run_cv(common, grid_path, folds, restarts, max_evals);
    if (fit->parsed()) return run_fit(common, fixed_path, restarts, max_evals);
    if (predict->parsed()) return run_predict(common, params_path, from_hours);
    if (evaluate->parsed()) return run_evaluate(common, params_path, from_hours);
  } catch (const trc::Error& e) {
    std::cerr << R"({"error":{"category":")" << e.category_name() << R"(","message":")"
              << e.what() << R"("}})" << "\n";
    switch (e.category()) {
      case trc::ErrorCategory::Config: return 2;
      case trc::ErrorCategory::Data: return 3;
      case trc::ErrorCategory::Numerical: return 4;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << R"({"error":{"category":"config","message":")" << e.what() << R"("}})"
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << R"({"error":{"category":"numerical","message":")" << e.what() << R"("}})"
              << "\n";
    return 4;
  }
  return 0;
}
