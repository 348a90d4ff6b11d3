#include "trc/parametric.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "trc/errors.hpp"
#include "trc/optim.hpp"
#include "trc/rng.hpp"

namespace trc {

double BellParams::width_of(int patient, int component) const {
  if (kind == ModelKind::PIdr && component > 0) {
    return width_coupling[component - 1] * width(patient, 0);
  }
  return width(patient, component);
}

void BellParams::validate(int num_patients, int num_components) const {
  if (kind != ModelKind::PResp && kind != ModelKind::PIdr) {
    throw ConfigError("bell params: kind must be p-resp or p-idr");
  }
  if (magnitude.rows() != num_patients || magnitude.cols() != num_components) {
    throw ConfigError("bell params: magnitude shape mismatch");
  }
  if (width.rows() != num_patients || width.cols() != num_components) {
    throw ConfigError("bell params: width shape mismatch");
  }
  if ((magnitude.array() < 0.0).any()) {
    throw ConfigError("bell params: magnitudes must be non-negative");
  }
  for (int i = 0; i < num_patients; ++i) {
    for (int q = 0; q < num_components; ++q) {
      if (!(width_of(i, q) > 0.0)) throw ConfigError("bell params: widths must be positive");
    }
  }
  if (kind == ModelKind::PIdr &&
      static_cast<int>(width_coupling.size()) != num_components - 1) {
    throw ConfigError("bell params: coupling coefficient count mismatch");
  }
  if (!(noise_variance > 0.0)) throw ConfigError("bell params: noise variance must be positive");
}

double bell_response(double time, double meal_time, double height, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bell_response width must be positive");
  const double d = time - meal_time - 3.0 * width;
  return height * std::exp(-0.5 * d * d / (width * width));
}

Eigen::VectorXd parametric_component_response(const std::vector<double>& times,
                                              const MealEvent& meal, const BellParams& params,
                                              int patient, int component) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(times.size()));
  const double height = params.magnitude(patient, component) * meal.dosages[component];
  const double width = params.width_of(patient, component);
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    out[k] = bell_response(times[static_cast<std::size_t>(k)], meal.time, height, width);
  }
  return out;
}

Eigen::VectorXd parametric_response(const std::vector<double>& times,
                                    const std::vector<MealEvent>& meals,
                                    const BellParams& params, int patient) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(times.size()));
  for (const auto& meal : meals) {
    for (int q = 0; q < params.magnitude.cols(); ++q) {
      out += parametric_component_response(times, meal, params, patient, q);
    }
  }
  return out;
}

BellParams default_bell_params(ModelKind kind, int num_patients, int num_components) {
  BellParams p;
  p.kind = kind;
  p.magnitude = Eigen::MatrixXd::Constant(num_patients, num_components, 0.01);
  p.width = Eigen::MatrixXd::Constant(num_patients, num_components, 0.5);
  p.width_coupling = Eigen::VectorXd::Ones(std::max(0, num_components - 1));
  p.mag_log_mean = Eigen::VectorXd::Constant(num_components, std::log(0.01));
  p.mag_log_sd = Eigen::VectorXd::Constant(num_components, 0.3);
  p.width_log_mean = Eigen::VectorXd::Constant(num_components, std::log(0.5));
  p.width_log_sd = Eigen::VectorXd::Constant(num_components, 0.3);
  p.noise_variance = 0.1;
  return p;
}

namespace {

// The joint MAP over parameters and hyperparameters is unbounded without
// regularization: values can slide to zero while the population log-mean
// follows and the log-sd stretches. The log-sd is floored at kMinLogSd
// with a weak log-normal prior on the excess, and the log-means get weak
// normal hyperpriors anchored at the initialization defaults; the anchor
// penalty grows quadratically along the degenerate direction while the
// prior-density gain is only linear, so the objective stays bounded.
constexpr double kMinLogSd = 0.05;
constexpr double kHyperMeanSd = 2.0;
constexpr double kLogSdAnchor = -1.3862943611198906;  // log 0.25
constexpr double kLogSdPriorSd = 1.0;

struct Packer {
  ModelKind kind;
  int patients;
  int components;

  int dim() const {
    const int pq = patients * components;
    if (kind == ModelKind::PResp) {
      // log beta, log l, mag hypers (mu, sd), width hypers (mu, sd), log noise
      return 2 * pq + 4 * components + 1;
    }
    // log beta, log l_i1, log c_q, mag hypers, width hypers (component 0), noise
    return pq + patients + (components - 1) + 2 * components + 2 + 1;
  }

  Eigen::VectorXd pack(const BellParams& p) const {
    Eigen::VectorXd x(dim());
    int at = 0;
    for (int i = 0; i < patients; ++i) {
      for (int q = 0; q < components; ++q) x[at++] = std::log(p.magnitude(i, q));
    }
    if (kind == ModelKind::PResp) {
      for (int i = 0; i < patients; ++i) {
        for (int q = 0; q < components; ++q) x[at++] = std::log(p.width(i, q));
      }
    } else {
      for (int i = 0; i < patients; ++i) x[at++] = std::log(p.width(i, 0));
      for (int q = 1; q < components; ++q) x[at++] = std::log(p.width_coupling[q - 1]);
    }
    for (int q = 0; q < components; ++q) {
      x[at++] = p.mag_log_mean[q];
      x[at++] = std::log(p.mag_log_sd[q] - kMinLogSd);
    }
    const int width_groups = kind == ModelKind::PResp ? components : 1;
    for (int q = 0; q < width_groups; ++q) {
      x[at++] = p.width_log_mean[q];
      x[at++] = std::log(p.width_log_sd[q] - kMinLogSd);
    }
    x[at++] = std::log(p.noise_variance);
    return x;
  }

  BellParams unpack(const Eigen::VectorXd& x) const {
    BellParams p = default_bell_params(kind, patients, components);
    int at = 0;
    for (int i = 0; i < patients; ++i) {
      for (int q = 0; q < components; ++q) p.magnitude(i, q) = std::exp(x[at++]);
    }
    if (kind == ModelKind::PResp) {
      for (int i = 0; i < patients; ++i) {
        for (int q = 0; q < components; ++q) p.width(i, q) = std::exp(x[at++]);
      }
    } else {
      for (int i = 0; i < patients; ++i) {
        const double base = std::exp(x[at++]);
        for (int q = 0; q < components; ++q) p.width(i, q) = base;
      }
      for (int q = 1; q < components; ++q) p.width_coupling[q - 1] = std::exp(x[at++]);
    }
    for (int q = 0; q < components; ++q) {
      p.mag_log_mean[q] = x[at++];
      p.mag_log_sd[q] = kMinLogSd + std::exp(x[at++]);
    }
    const int width_groups = kind == ModelKind::PResp ? components : 1;
    for (int q = 0; q < width_groups; ++q) {
      p.width_log_mean[q] = x[at++];
      p.width_log_sd[q] = kMinLogSd + std::exp(x[at++]);
    }
    for (int q = width_groups; q < components; ++q) {
      p.width_log_mean[q] = p.width_log_mean[0];
      p.width_log_sd[q] = p.width_log_sd[0];
    }
    p.noise_variance = std::exp(x[at++]);
    return p;
  }
};

double lognormal_logpdf(double value, double log_mean, double log_sd) {
  const double z = (std::log(value) - log_mean) / log_sd;
  return -std::log(value) - std::log(log_sd) - 0.5 * std::log(2.0 * std::numbers::pi) -
         0.5 * z * z;
}

double log_posterior(const Dataset& train, const BellParams& p) {
  const int patients = train.num_patients();
  const int components = train.num_components();
  double ll = 0.0;
  const double inv2s = 0.5 / p.noise_variance;
  const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi * p.noise_variance);
  for (int i = 0; i < patients; ++i) {
    const auto& rec = train.patients[i];
    const Eigen::VectorXd f = parametric_response(rec.times, rec.meals, p, i);
    for (std::size_t k = 0; k < rec.values.size(); ++k) {
      const double r = rec.values[k] - f[static_cast<Eigen::Index>(k)];
      ll += -log_norm - r * r * inv2s;
    }
  }
  for (int i = 0; i < patients; ++i) {
    for (int q = 0; q < components; ++q) {
      ll += lognormal_logpdf(p.magnitude(i, q), p.mag_log_mean[q], p.mag_log_sd[q]);
    }
    if (p.kind == ModelKind::PResp) {
      for (int q = 0; q < components; ++q) {
        ll += lognormal_logpdf(p.width(i, q), p.width_log_mean[q], p.width_log_sd[q]);
      }
    } else {
      ll += lognormal_logpdf(p.width(i, 0), p.width_log_mean[0], p.width_log_sd[0]);
    }
  }
  const BellParams anchor = default_bell_params(p.kind, patients, components);
  const double inv2h = 0.5 / (kHyperMeanSd * kHyperMeanSd);
  const double inv2sd = 0.5 / (kLogSdPriorSd * kLogSdPriorSd);
  const auto sd_penalty = [&](double sd) {
    const double d = std::log(sd - kMinLogSd) - kLogSdAnchor;
    return d * d * inv2sd;
  };
  for (int q = 0; q < components; ++q) {
    const double dm = p.mag_log_mean[q] - anchor.mag_log_mean[q];
    ll -= dm * dm * inv2h;
    ll -= sd_penalty(p.mag_log_sd[q]);
  }
  const int width_groups = p.kind == ModelKind::PResp ? components : 1;
  for (int q = 0; q < width_groups; ++q) {
    const double dw = p.width_log_mean[q] - anchor.width_log_mean[q];
    ll -= dw * dw * inv2h;
    ll -= sd_penalty(p.width_log_sd[q]);
  }
  if (p.kind == ModelKind::PIdr) {
    // Weak log-normal prior around 1 keeps the coupling identified when a
    // component's magnitude vanishes.
    for (Eigen::Index q = 0; q < p.width_coupling.size(); ++q) {
      const double lc = std::log(p.width_coupling[q]);
      ll -= 0.5 * lc * lc;
    }
  }
  return ll;
}

}  // namespace

ParametricFitResult fit_parametric_map(const Dataset& train, ModelKind kind,
                                       const ParametricFitOptions& options) {
  if (kind != ModelKind::PResp && kind != ModelKind::PIdr) {
    throw ConfigError("fit_parametric_map: kind must be p-resp or p-idr");
  }
  train.validate();
  const Packer packer{kind, train.num_patients(), train.num_components()};
  const Eigen::VectorXd start = packer.pack(
      default_bell_params(kind, train.num_patients(), train.num_components()));

  const auto objective = [&](const Eigen::VectorXd& x) {
    const BellParams p = packer.unpack(x);
    return -log_posterior(train, p);
  };

  NelderMeadOptions nm;
  nm.max_evals = options.max_evals > 0 ? options.max_evals : 400 * packer.dim();

  Rng rng(options.seed ^ 0x9e3779b97f4a7c15ull);
  ParametricFitResult best;
  bool have_best = false;
  double initial = -objective(start);
  std::string last_error;
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd x0 = start;
    if (r > 0) {
      for (Eigen::Index k = 0; k < x0.size(); ++k) {
        x0[k] += std::log(rng.uniform(0.5, 2.0));
      }
    }
    try {
      const NelderMeadResult run = nelder_mead(objective, x0, nm);
      if (!have_best || -run.fx > best.objective) {
        best.params = packer.unpack(run.x);
        best.objective = -run.fx;
        have_best = true;
      }
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  if (!have_best) {
    throw NumericalError("fit_parametric_map: every restart failed (" + last_error + ")");
  }
  best.initial_objective = initial;
  // The optimizer never accepts a move that worsens its own incumbent, so
  // the returned objective is at least the initial one.
  if (best.objective + 1e-9 < initial) {
    throw NumericalError("fit_parametric_map: optimizer regressed below its start");
  }
  return best;
}

}  // namespace trc
