#include "trc/covariance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "trc/errors.hpp"

namespace trc {

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::GpResp: return "gp-resp";
    case ModelKind::GpLfm: return "gp-lfm";
    case ModelKind::GpConv: return "gp-conv";
    case ModelKind::PResp: return "p-resp";
    case ModelKind::PIdr: return "p-idr";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "gp-resp") return ModelKind::GpResp;
  if (name == "gp-lfm") return ModelKind::GpLfm;
  if (name == "gp-conv") return ModelKind::GpConv;
  if (name == "p-resp") return ModelKind::PResp;
  if (name == "p-idr") return ModelKind::PIdr;
  throw ConfigError("unknown model kind '" + name + "'");
}

bool is_gp_model(ModelKind kind) {
  return kind == ModelKind::GpResp || kind == ModelKind::GpLfm || kind == ModelKind::GpConv;
}

int ModelParams::num_response_blocks() const {
  if (kind == ModelKind::GpConv) return 1;
  return static_cast<int>(lengthscales.size());
}

TlseParams ModelParams::tlse(int q) const {
  return TlseParams{lengthscales.at(q), window};
}

LfmParams ModelParams::lfm(int q) const {
  return LfmParams{decay.at(q), sensitivity.at(q), TlseParams{lengthscales.at(q), window},
                   lfm_quad_nodes};
}

ConvFilterParams ModelParams::conv() const {
  return ConvFilterParams{shift_per_gram, spread_per_gram, lengthscales.at(0)};
}

void ModelParams::apply_grid(const GridPoint& point) {
  window = point.window;
  baseline.lengthscale = point.baseline_lengthscale;
  if (!lengthscales.empty()) lengthscales[0] = point.driving_lengthscale;
  if (kind != ModelKind::GpConv && std::isfinite(point.secondary_lengthscale)) {
    for (std::size_t q = 1; q < lengthscales.size(); ++q) {
      lengthscales[q] = point.secondary_lengthscale;
    }
  }
}

void ModelParams::validate(int num_patients, int num_components) const {
  if (!(window > 0.0)) throw ConfigError("model params: effect window must be positive");
  if (!(noise_variance > 0.0)) throw ConfigError("model params: noise variance must be positive");
  if (!(baseline.lengthscale > 0.0) || baseline.variance < 0.0) {
    throw ConfigError("model params: invalid baseline parameters");
  }
  if (coreg.weights.rows() != num_patients || coreg.weights.cols() != num_components) {
    throw ConfigError("model params: coregionalization weight shape mismatch");
  }
  if ((coreg.weights.array() < 0.0).any()) {
    throw ConfigError("model params: coregionalization weights must be non-negative");
  }
  if (coreg.meal_noise.size() < num_response_blocks() ||
      (coreg.meal_noise.array() < 0.0).any()) {
    throw ConfigError("model params: invalid per-meal response variances");
  }
  if (static_cast<int>(lengthscales.size()) != num_components) {
    throw ConfigError("model params: lengthscale count mismatch");
  }
  for (double l : lengthscales) {
    if (!(l > 0.0)) throw ConfigError("model params: lengthscales must be positive");
  }
  if (kind == ModelKind::GpLfm) {
    if (static_cast<int>(decay.size()) != num_components ||
        static_cast<int>(sensitivity.size()) != num_components) {
      throw ConfigError("model params: LFM decay/sensitivity count mismatch");
    }
  }
  if (kind == ModelKind::GpConv) {
    if (static_cast<int>(shift_per_gram.size()) != num_components - 1 ||
        static_cast<int>(spread_per_gram.size()) != num_components - 1) {
      throw ConfigError("model params: convolution filter coefficient count mismatch");
    }
  }
}

ModelParams default_params(ModelKind kind, int num_patients, int num_components) {
  ModelParams p;
  p.kind = kind;
  p.coreg.weights = Eigen::MatrixXd::Constant(num_patients, num_components, 0.01);
  p.coreg.meal_noise = Eigen::VectorXd::Constant(num_components, 0.01);
  p.lengthscales.assign(num_components, 0.3);
  for (int q = 1; q < num_components; ++q) p.lengthscales[q] = 0.8;
  if (kind == ModelKind::GpLfm) {
    p.decay.assign(num_components, 1.0);
    p.sensitivity.assign(num_components, 1.0);
  }
  if (kind == ModelKind::GpConv) {
    p.shift_per_gram.assign(std::max(0, num_components - 1), 0.05);
    p.spread_per_gram.assign(std::max(0, num_components - 1), 0.02);
  }
  return p;
}

Eigen::VectorXd relative_times(const std::vector<double>& obs_times, double meal_time) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(obs_times.size()));
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    out[k] = obs_times[static_cast<std::size_t>(k)] - meal_time;
  }
  return out;
}

namespace {

struct Hit {
  int meal = 0;
  double rel = 0.0;
};

// Per-point list of meals whose effect window covers it.
struct PointContext {
  int patient = 0;
  double time = 0.0;
  std::vector<Hit> hits;
};

// Per-meal quantities that do not depend on the observation: block weights
// b_iq m_jq (or the joint GP-Conv weight) and the GP-Conv filter.
struct MealCache {
  std::vector<std::vector<Eigen::VectorXd>> weight;  // [patient][meal] -> per block
  std::vector<std::vector<ConvFilter>> filter;       // GP-Conv only
};

MealCache build_meal_cache(const Dataset& data, const ModelParams& params) {
  MealCache cache;
  const int blocks = params.num_response_blocks();
  cache.weight.resize(data.patients.size());
  if (params.kind == ModelKind::GpConv) cache.filter.resize(data.patients.size());
  for (int i = 0; i < data.num_patients(); ++i) {
    const auto& meals = data.patients[i].meals;
    cache.weight[i].reserve(meals.size());
    for (const auto& meal : meals) {
      Eigen::VectorXd w(blocks);
      if (params.kind == ModelKind::GpConv) {
        w[0] = params.coreg.weights.row(i).dot(meal.dosages);
        cache.filter[i].push_back(conv_filter(meal.dosages, params.conv()));
      } else {
        for (int q = 0; q < blocks; ++q) {
          w[q] = params.coreg.weights(i, q) * meal.dosages[q];
        }
      }
      cache.weight[i].push_back(std::move(w));
    }
  }
  return cache;
}

PointContext build_point_context(const Dataset& meal_source, const ModelParams& params,
                                 int patient, double time) {
  if (patient < 0 || patient >= meal_source.num_patients()) {
    throw DataError("covariance: patient index out of range");
  }
  PointContext ctx;
  ctx.patient = patient;
  ctx.time = time;
  const auto& meals = meal_source.patients[patient].meals;
  for (int j = 0; j < static_cast<int>(meals.size()); ++j) {
    const double rel = time - meals[j].time;
    if (window_indicator(rel, params.window) == 1.0) {
      ctx.hits.push_back({j, rel});
    }
  }
  return ctx;
}

std::vector<PointContext> build_contexts(const Dataset& meal_source, const ModelParams& params,
                                         const std::vector<QueryPoint>& points) {
  std::vector<PointContext> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    out.push_back(build_point_context(meal_source, params, p.patient, p.time));
  }
  return out;
}

double response_entry(const ModelParams& params, const MealCache& cache_a,
                      const MealCache& cache_b, const PointContext& a, const PointContext& b,
                      int block) {
  double acc = 0.0;
  const double kappa = params.coreg.meal_noise[block];
  const bool same_patient = a.patient == b.patient;
  for (const Hit& ha : a.hits) {
    const double wa = cache_a.weight[a.patient][ha.meal][block];
    for (const Hit& hb : b.hits) {
      double w = wa * cache_b.weight[b.patient][hb.meal][block];
      if (same_patient && ha.meal == hb.meal) w += kappa;
      if (w == 0.0) continue;
      double k = 0.0;
      switch (params.kind) {
        case ModelKind::GpResp:
          k = tlse_kernel(ha.rel, hb.rel, params.tlse(block));
          break;
        case ModelKind::GpLfm:
          k = lfm_kernel(ha.rel, hb.rel, params.lfm(block));
          break;
        case ModelKind::GpConv:
          k = conv_kernel(ha.rel, hb.rel, cache_a.filter[a.patient][ha.meal],
                          cache_b.filter[b.patient][hb.meal], params.lengthscales[0]);
          break;
        default:
          throw ConfigError("response covariance is only defined for GP models");
      }
      acc += w * k;
    }
  }
  return acc;
}

double part_entry(const ModelParams& params, const MealCache& cache_a, const MealCache& cache_b,
                  const PointContext& a, const PointContext& b, CovPart part, int block) {
  switch (part) {
    case CovPart::Baseline:
      return baseline_cov(params.baseline, a.patient, a.time, b.patient, b.time);
    case CovPart::Component:
      return response_entry(params, cache_a, cache_b, a, b, block);
    case CovPart::Total: {
      double acc = baseline_cov(params.baseline, a.patient, a.time, b.patient, b.time);
      for (int q = 0; q < params.num_response_blocks(); ++q) {
        acc += response_entry(params, cache_a, cache_b, a, b, q);
      }
      return acc;
    }
  }
  return 0.0;
}

}  // namespace

double response_cross_cov(const Dataset& data, const ModelParams& params, int patient_a,
                          double time_a, int patient_b, double time_b, int block) {
  if (block < 0 || block >= params.num_response_blocks()) {
    throw ConfigError("response_cross_cov: block index out of range");
  }
  const MealCache cache = build_meal_cache(data, params);
  const PointContext a = build_point_context(data, params, patient_a, time_a);
  const PointContext b = build_point_context(data, params, patient_b, time_b);
  return response_entry(params, cache, cache, a, b, block);
}

double baseline_cov(const BaselineParams& params, int patient_a, double time_a, int patient_b,
                    double time_b) {
  if (patient_a != patient_b) return 0.0;
  if (params.variance == 0.0) return 0.0;
  return params.variance * se_kernel(time_a, time_b, params.lengthscale);
}

CovarianceBundle assemble_total_cov(const Dataset& data, const ModelParams& params) {
  params.validate(data.num_patients(), data.num_components());
  CovarianceBundle bundle;
  bundle.rows = flatten_rows(data);
  const auto n = static_cast<Eigen::Index>(bundle.rows.size());
  const int blocks = params.num_response_blocks();

  const MealCache cache = build_meal_cache(data, params);
  std::vector<PointContext> ctx;
  ctx.reserve(bundle.rows.size());
  for (const auto& row : bundle.rows) {
    ctx.push_back(build_point_context(data, params, row.patient, row.time));
  }

  bundle.baseline.setZero(n, n);
  bundle.component.assign(blocks, Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r; c < n; ++c) {
      const double kb = baseline_cov(params.baseline, ctx[r].patient, ctx[r].time,
                                     ctx[c].patient, ctx[c].time);
      bundle.baseline(r, c) = kb;
      bundle.baseline(c, r) = kb;
      for (int q = 0; q < blocks; ++q) {
        const double kr = response_entry(params, cache, cache, ctx[r], ctx[c], q);
        bundle.component[q](r, c) = kr;
        bundle.component[q](c, r) = kr;
      }
    }
  }

  bundle.total = bundle.baseline;
  for (const auto& block : bundle.component) bundle.total += block;

  if (!bundle.total.allFinite()) {
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        if (!std::isfinite(bundle.total(r, c))) {
          throw NumericalError("assemble_total_cov: non-finite entry at (" + std::to_string(r) +
                               ", " + std::to_string(c) + ")");
        }
      }
    }
  }
  return bundle;
}

Eigen::MatrixXd cross_cov(const Dataset& train, const ModelParams& params,
                          const std::vector<QueryPoint>& queries, CovPart part, int block,
                          const Dataset* query_context) {
  params.validate(train.num_patients(), train.num_components());
  const Dataset& qctx = query_context ? *query_context : train;
  if (qctx.num_patients() != train.num_patients()) {
    throw DataError("cross_cov: query context patients differ from training data");
  }
  const MealCache train_cache = build_meal_cache(train, params);
  const MealCache query_cache =
      query_context ? build_meal_cache(qctx, params) : train_cache;

  const std::vector<RowInfo> rows = flatten_rows(train);
  std::vector<PointContext> train_ctx;
  train_ctx.reserve(rows.size());
  for (const auto& row : rows) {
    train_ctx.push_back(build_point_context(train, params, row.patient, row.time));
  }
  const std::vector<PointContext> query_ctx = build_contexts(qctx, params, queries);

  Eigen::MatrixXd out(static_cast<Eigen::Index>(queries.size()),
                      static_cast<Eigen::Index>(rows.size()));
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      out(r, c) = part_entry(params, query_cache, train_cache, query_ctx[r], train_ctx[c],
                             part, block);
    }
  }
  return out;
}

Eigen::MatrixXd query_prior_cov(const Dataset& train, const ModelParams& params,
                                const std::vector<QueryPoint>& queries, CovPart part, int block,
                                const Dataset* query_context) {
  params.validate(train.num_patients(), train.num_components());
  const Dataset& qctx = query_context ? *query_context : train;
  const MealCache cache = build_meal_cache(qctx, params);
  const std::vector<PointContext> ctx = build_contexts(qctx, params, queries);

  const auto n = static_cast<Eigen::Index>(queries.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r; c < n; ++c) {
      const double v = part_entry(params, cache, cache, ctx[r], ctx[c], part, block);
      out(r, c) = v;
      out(c, r) = v;
    }
  }
  return out;
}

}  // namespace trc
