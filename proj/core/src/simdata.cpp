#include "trc/simdata.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "trc/errors.hpp"

namespace trc {

void SimConfig::validate() const {
  if (patients < 1) throw ConfigError("sim config: need at least one patient");
  if (days < 1) throw ConfigError("sim config: need at least one day");
  if (!(grid_minutes > 0.0)) throw ConfigError("sim config: grid spacing must be positive");
  if (meals_per_day_min < 0 || meals_per_day_max < meals_per_day_min ||
      meals_per_day_max > 3) {
    throw ConfigError("sim config: meals-per-day range must lie within [0, 3]");
  }
  if (components.empty()) throw ConfigError("sim config: need at least one component");
  for (const auto& c : components) {
    if (!(c.median_grams > 0.0) || !(c.log_sd >= 0.0)) {
      throw ConfigError("sim config: component '" + c.name + "' has invalid dosage distribution");
    }
  }
  if (!(noise_sd >= 0.0)) throw ConfigError("sim config: negative noise sd");
  if (kind == ModelKind::PResp || kind == ModelKind::PIdr) {
    if (gp_params.has_value()) {
      throw ConfigError("sim config: gp_params given for a parametric generator");
    }
  } else if (bell_params.has_value()) {
    throw ConfigError("sim config: bell_params given for a GP generator");
  }
}

Eigen::VectorXd sample_gp(const Eigen::MatrixXd& K, Rng& rng) {
  const Eigen::Index n = K.rows();
  if (n == 0) return Eigen::VectorXd();
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 1e-12;
  for (;;) {
    Eigen::MatrixXd shifted = K;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) break;
    jitter *= 10.0;
    if (jitter > 1e-4) throw NumericalError("sample_gp: covariance not factorizable");
  }
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
  return llt.matrixL() * z;
}

namespace {

std::string patient_label(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%02d", index + 1);
  return buf;
}

// Meal slots within a day, hours: morning, noon, evening.
constexpr double kSlots[3][2] = {{7.0, 9.5}, {11.5, 14.0}, {17.0, 19.5}};

std::vector<int> slots_for_count(int count) {
  switch (count) {
    case 0: return {};
    case 1: return {1};
    case 2: return {0, 2};
    default: return {0, 1, 2};
  }
}

ModelParams draw_gp_params(const SimConfig& cfg, Rng& rng) {
  ModelParams p = default_params(cfg.kind, cfg.patients, static_cast<int>(cfg.components.size()));
  const int q = static_cast<int>(cfg.components.size());
  for (int i = 0; i < cfg.patients; ++i) {
    for (int c = 0; c < q; ++c) {
      const double median = c == 0 ? 0.06 : 0.04;
      p.coreg.weights(i, c) = rng.lognormal(std::log(median), 0.25);
    }
  }
  p.coreg.meal_noise.setConstant(0.005);
  p.baseline.variance = 0.5;
  p.baseline.lengthscale = 10.0;
  p.noise_variance = cfg.noise_sd > 0.0 ? cfg.noise_sd * cfg.noise_sd : 1e-6;
  if (cfg.kind == ModelKind::GpLfm) {
    p.decay.assign(q, 1.0);
    p.sensitivity.assign(q, 1.0);
  }
  if (cfg.kind == ModelKind::GpConv) {
    p.shift_per_gram.assign(std::max(0, q - 1), 0.05);
    p.spread_per_gram.assign(std::max(0, q - 1), 0.02);
  }
  return p;
}

BellParams draw_bell_params(const SimConfig& cfg, Rng& rng) {
  const int q = static_cast<int>(cfg.components.size());
  BellParams p = default_bell_params(cfg.kind, cfg.patients, q);
  for (int i = 0; i < cfg.patients; ++i) {
    for (int c = 0; c < q; ++c) {
      const double median = c == 0 ? 0.05 : 0.03;
      p.magnitude(i, c) = rng.lognormal(std::log(median), 0.25);
      p.width(i, c) = rng.lognormal(std::log(c == 0 ? 0.4 : 0.7), 0.15);
    }
  }
  if (cfg.kind == ModelKind::PIdr) {
    for (int c = 1; c < q; ++c) p.width_coupling[c - 1] = 1.5;
  }
  p.noise_variance = cfg.noise_sd > 0.0 ? cfg.noise_sd * cfg.noise_sd : 1e-6;
  return p;
}

// Rows whose response is structurally nonzero: at least one meal window
// covers them. Sampling restricts to this subset; the rest stays zero.
std::vector<Eigen::Index> active_rows(const Dataset& data, double window) {
  std::vector<Eigen::Index> idx;
  const auto rows = flatten_rows(data);
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(rows.size()); ++r) {
    const auto& p = data.patients[rows[r].patient];
    for (const auto& meal : p.meals) {
      const double rel = rows[r].time - meal.time;
      if (rel > 0.0 && rel < window) {
        idx.push_back(r);
        break;
      }
    }
  }
  return idx;
}

}  // namespace

SimResult generate_dataset(const SimConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const int q = static_cast<int>(config.components.size());
  const double horizon = config.days * 24.0;
  const double step = config.grid_minutes / 60.0;
  const auto grid_size = static_cast<int>(std::floor(horizon / step + 1e-9));

  SimResult sim;
  sim.data.components.reserve(config.components.size());
  for (const auto& c : config.components) sim.data.components.push_back(c.name);

  std::vector<double> basal(config.patients);
  for (int i = 0; i < config.patients; ++i) {
    PatientRecord rec;
    rec.id = patient_label(i);
    basal[i] = rng.normal(config.basal_mean, config.basal_sd);
    rec.times.resize(grid_size);
    for (int k = 0; k < grid_size; ++k) rec.times[k] = k * step;
    rec.values.assign(grid_size, 0.0);
    for (int day = 0; day < config.days; ++day) {
      const int count = config.meals_per_day_min +
                        static_cast<int>(rng.integer(
                            config.meals_per_day_max - config.meals_per_day_min + 1));
      for (int slot : slots_for_count(count)) {
        MealEvent meal;
        meal.time = day * 24.0 + rng.uniform(kSlots[slot][0], kSlots[slot][1]);
        meal.dosages.resize(q);
        for (int c = 0; c < q; ++c) {
          meal.dosages[c] =
              rng.lognormal(std::log(config.components[c].median_grams),
                            config.components[c].log_sd);
        }
        rec.meals.push_back(std::move(meal));
      }
      std::sort(rec.meals.begin(), rec.meals.end(),
                [](const MealEvent& a, const MealEvent& b) { return a.time < b.time; });
    }
    sim.data.patients.push_back(std::move(rec));
  }

  SyntheticTruth& truth = sim.truth;
  truth.kind = config.kind;
  truth.noise_sd = config.noise_sd;
  truth.basal = basal;

  const bool parametric = config.kind == ModelKind::PResp || config.kind == ModelKind::PIdr;
  if (parametric) {
    truth.bell_params = config.bell_params ? *config.bell_params : draw_bell_params(config, rng);
    truth.bell_params.validate(config.patients, q);
  } else {
    truth.gp_params = config.gp_params ? *config.gp_params : draw_gp_params(config, rng);
    truth.gp_params.validate(config.patients, q);
  }

  const int blocks = parametric ? q : truth.gp_params.num_response_blocks();
  truth.baseline.resize(config.patients);
  truth.total.resize(config.patients);
  truth.component.assign(config.patients, std::vector<Eigen::VectorXd>(
                                              blocks, Eigen::VectorXd::Zero(grid_size)));

  // Baseline: per-patient constant level plus, for GP generators, a smooth
  // SE-kernel draw.
  for (int i = 0; i < config.patients; ++i) {
    Eigen::VectorXd b = Eigen::VectorXd::Constant(grid_size, basal[i]);
    if (!parametric && truth.gp_params.baseline.variance > 0.0) {
      Eigen::MatrixXd K(grid_size, grid_size);
      const auto& times = sim.data.patients[i].times;
      for (int r = 0; r < grid_size; ++r) {
        for (int c = r; c < grid_size; ++c) {
          const double v = baseline_cov(truth.gp_params.baseline, 0, times[r], 0, times[c]);
          K(r, c) = v;
          K(c, r) = v;
        }
      }
      b += sample_gp(K, rng);
    }
    truth.baseline[i] = std::move(b);
  }

  if (parametric) {
    for (int i = 0; i < config.patients; ++i) {
      const auto& rec = sim.data.patients[i];
      for (const auto& meal : rec.meals) {
        for (int c = 0; c < q; ++c) {
          truth.component[i][c] +=
              parametric_component_response(rec.times, meal, truth.bell_params, i, c);
        }
      }
    }
  } else {
    const std::vector<Eigen::Index> active = active_rows(sim.data, truth.gp_params.window);
    const auto rows = flatten_rows(sim.data);
    std::vector<QueryPoint> points;
    points.reserve(active.size());
    for (Eigen::Index r : active) {
      const RowInfo& row = rows[static_cast<std::size_t>(r)];
      points.push_back({row.patient, row.time});
    }
    for (int block = 0; block < blocks; ++block) {
      const Eigen::MatrixXd sub =
          query_prior_cov(sim.data, truth.gp_params, points, CovPart::Component, block);
      const Eigen::VectorXd draw = sample_gp(sub, rng);
      for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(active.size()); ++r) {
        const RowInfo& row = rows[static_cast<std::size_t>(active[r])];
        truth.component[row.patient][block][row.obs] = draw[r];
      }
    }
  }

  for (int i = 0; i < config.patients; ++i) {
    Eigen::VectorXd total = truth.baseline[i];
    for (int block = 0; block < blocks; ++block) total += truth.component[i][block];
    truth.total[i] = total;
    auto& rec = sim.data.patients[i];
    for (int k = 0; k < grid_size; ++k) {
      rec.values[static_cast<std::size_t>(k)] = total[k] + config.noise_sd * rng.normal();
    }
  }

  sim.data.validate();
  return sim;
}

Eigen::VectorXd oracle_predict(const SimResult& sim, const std::vector<QueryPoint>& queries) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(queries.size()));
  for (std::size_t k = 0; k < queries.size(); ++k) {
    const auto& qp = queries[k];
    if (qp.patient < 0 || qp.patient >= sim.data.num_patients()) {
      throw DataError("oracle_predict: patient index out of range");
    }
    const auto& times = sim.data.patients[qp.patient].times;
    const auto it = std::lower_bound(times.begin(), times.end(), qp.time - 1e-9);
    if (it == times.end() || std::abs(*it - qp.time) > 1e-9) {
      throw DataError("oracle_predict: query time " + std::to_string(qp.time) +
                      " is not on the generated grid");
    }
    const auto idx = static_cast<Eigen::Index>(it - times.begin());
    out[static_cast<Eigen::Index>(k)] = sim.truth.total[qp.patient][idx];
  }
  return out;
}

}  // namespace trc
