#include "trc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "trc/errors.hpp"
#include "trc/quadrature.hpp"

namespace trc {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

// int_0^A int_0^B e^{D(u+u')} exp(-0.5 (u-u')^2 / ell^2) du' du with an
// n-point tensor Gauss-Legendre rule.
double lfm_double_integral(double upper_u, double upper_v, double decay, double lengthscale,
                           int nodes) {
  const GaussLegendre& base = gauss_legendre(nodes);
  const GaussLegendre u = rescale(base, 0.0, upper_u);
  const GaussLegendre v = rescale(base, 0.0, upper_v);

  const Eigen::ArrayXd wu = u.weights.array() * (decay * u.nodes.array()).exp();
  const Eigen::ArrayXd wv = v.weights.array() * (decay * v.nodes.array()).exp();

  const double inv2 = -0.5 / (lengthscale * lengthscale);
  const Eigen::MatrixXd gram =
      (inv2 * (u.nodes.replicate(1, nodes) - v.nodes.transpose().replicate(nodes, 1))
                  .array()
                  .square())
          .exp()
          .matrix();
  return wu.matrix().transpose() * gram * wv.matrix();
}

}  // namespace

double se_kernel(double dt, double dt2, double lengthscale) {
  require_positive(lengthscale, "se_kernel lengthscale");
  const double d = (dt - dt2) / lengthscale;
  return std::exp(-0.5 * d * d);
}

double window_indicator(double dt, double window) {
  require_positive(window, "window_indicator window");
  return (dt > 0.0 && dt < window) ? 1.0 : 0.0;
}

double tlse_kernel(double dt, double dt2, const TlseParams& params) {
  require_positive(params.window, "tlse_kernel window");
  if (window_indicator(dt, params.window) == 0.0 ||
      window_indicator(dt2, params.window) == 0.0) {
    return 0.0;
  }
  return se_kernel(dt, dt2, params.lengthscale);
}

LfmQuadrature lfm_kernel_adaptive(double dt, double dt2, const LfmParams& params) {
  require_positive(params.decay, "lfm_kernel decay");
  require_positive(params.sensitivity, "lfm_kernel sensitivity");
  require_positive(params.latent.lengthscale, "lfm_kernel latent lengthscale");
  require_positive(params.latent.window, "lfm_kernel window");
  if (params.quad_nodes < 8) {
    throw std::invalid_argument("lfm_kernel quadrature node count must be >= 8");
  }
  if (dt < 0.0 || dt2 < 0.0) {
    throw std::invalid_argument("lfm_kernel requires non-negative relative times");
  }

  LfmQuadrature out;
  out.nodes_per_axis = params.quad_nodes;
  if (dt == 0.0 || dt2 == 0.0) return out;

  // The latent TLSE vanishes beyond the window, so the integration range
  // clips at T and the integrand stays smooth.
  const double upper_u = std::min(dt, params.latent.window);
  const double upper_v = std::min(dt2, params.latent.window);

  constexpr int kMaxNodes = 1024;
  constexpr double kRelTol = 1e-6;

  double previous = lfm_double_integral(upper_u, upper_v, params.decay,
                                        params.latent.lengthscale, params.quad_nodes);
  int nodes = params.quad_nodes;
  bool converged = false;
  double integral = previous;
  while (nodes < kMaxNodes) {
    nodes *= 2;
    integral = lfm_double_integral(upper_u, upper_v, params.decay,
                                   params.latent.lengthscale, nodes);
    if (std::abs(integral - previous) <= kRelTol * std::max(std::abs(integral), 1e-12)) {
      converged = true;
      break;
    }
    previous = integral;
  }
  if (!converged) {
    throw NumericalError("lfm_kernel quadrature did not converge by " +
                         std::to_string(kMaxNodes) + " nodes per axis");
  }

  const double s = params.sensitivity;
  out.value = s * s * std::exp(-params.decay * (dt + dt2)) * integral;
  out.nodes_per_axis = nodes;
  return out;
}

double lfm_kernel(double dt, double dt2, const LfmParams& params) {
  return lfm_kernel_adaptive(dt, dt2, params).value;
}

double lfm_kernel_fixed(double dt, double dt2, const LfmParams& params, int nodes_per_axis) {
  require_positive(params.decay, "lfm_kernel decay");
  require_positive(params.latent.lengthscale, "lfm_kernel latent lengthscale");
  if (dt < 0.0 || dt2 < 0.0) {
    throw std::invalid_argument("lfm_kernel requires non-negative relative times");
  }
  if (dt == 0.0 || dt2 == 0.0) return 0.0;
  const double upper_u = std::min(dt, params.latent.window);
  const double upper_v = std::min(dt2, params.latent.window);
  const double integral = lfm_double_integral(upper_u, upper_v, params.decay,
                                              params.latent.lengthscale, nodes_per_axis);
  const double s = params.sensitivity;
  return s * s * std::exp(-params.decay * (dt + dt2)) * integral;
}

ConvFilter conv_filter(const Eigen::VectorXd& dosages, const ConvFilterParams& params) {
  const auto secondary = static_cast<Eigen::Index>(params.shift_per_gram.size());
  if (static_cast<Eigen::Index>(params.spread_per_gram.size()) != secondary) {
    throw std::invalid_argument("conv_filter: shift/spread coefficient counts differ");
  }
  if (dosages.size() < secondary + 1) {
    throw std::invalid_argument("conv_filter: dosage vector shorter than component count");
  }
  ConvFilter filter;
  for (Eigen::Index q = 0; q < secondary; ++q) {
    const double m = dosages[q + 1];
    if (m < 0.0 || !std::isfinite(m)) {
      throw DataError("conv_filter: negative or non-finite dosage");
    }
    if (params.shift_per_gram[q] < 0.0 || params.spread_per_gram[q] < 0.0) {
      throw std::invalid_argument("conv_filter: coefficients must be non-negative");
    }
    filter.shift += params.shift_per_gram[q] * m;
    filter.spread += params.spread_per_gram[q] * m;
  }
  return filter;
}

double conv_kernel(double dt, double dt2, double mu, double sigma, double mu2, double sigma2,
                   double latent_lengthscale) {
  require_positive(latent_lengthscale, "conv_kernel latent lengthscale");
  if (sigma < 0.0 || sigma2 < 0.0) {
    throw std::invalid_argument("conv_kernel filter spreads must be non-negative");
  }
  const double l2 = latent_lengthscale * latent_lengthscale;
  const double denom = l2 + sigma * sigma + sigma2 * sigma2;
  const double d = dt - dt2 - mu + mu2;
  return latent_lengthscale / std::sqrt(denom) * std::exp(-0.5 * d * d / denom);
}

double conv_kernel(double dt, double dt2, const ConvFilter& f, const ConvFilter& f2,
                   double latent_lengthscale) {
  return conv_kernel(dt, dt2, f.shift, f.spread, f2.shift, f2.spread, latent_lengthscale);
}

}  // namespace trc
