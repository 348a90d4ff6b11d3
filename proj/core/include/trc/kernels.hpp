#pragma once

#include <Eigen/Core>
#include <vector>

namespace trc {

// Parameters of the time-limited squared exponential covariance: SE
// lengthscale (hours) and effect window T (hours). Support is restricted
// to relative times in the open interval (0, T).
struct TlseParams {
  double lengthscale = 0.3;
  double window = 3.0;
};

// First-order ODE response kernel: decay D (1/h), sensitivity S, latent
// TLSE covariance, and the starting per-axis node count of the adaptive
// Gauss-Legendre rule used to evaluate the double integral.
struct LfmParams {
  double decay = 1.0;
  double sensitivity = 1.0;
  TlseParams latent;
  int quad_nodes = 32;
};

// Gaussian-filter convolution kernel parameters. shift_per_gram and
// spread_per_gram hold one coefficient per secondary treatment component
// (q = 2..Q); the driving component q = 1 carries the latent lengthscale.
struct ConvFilterParams {
  std::vector<double> shift_per_gram;
  std::vector<double> spread_per_gram;
  double latent_lengthscale = 0.3;
};

// Per-event Gaussian filter derived from its dosages: shift mu (hours) and
// spread sigma (hours).
struct ConvFilter {
  double shift = 0.0;
  double spread = 0.0;
};

// exp(-0.5 (dt - dt2)^2 / lengthscale^2), unit variance.
double se_kernel(double dt, double dt2, double lengthscale);

// 1 if 0 < dt < window, 0 otherwise (strict at both ends).
double window_indicator(double dt, double window);

// se_kernel masked by the window indicator of both arguments.
double tlse_kernel(double dt, double dt2, const TlseParams& params);

// ODE response covariance
//   S^2 exp(-D dt - D dt2) int_0^dt int_0^dt2 e^{D u} e^{D u'} k_TLSE(u,u') du' du
// evaluated by two-dimensional Gauss-Legendre quadrature with node doubling
// until the relative change drops below 1e-6. Requires dt, dt2 >= 0.
double lfm_kernel(double dt, double dt2, const LfmParams& params);

struct LfmQuadrature {
  double value = 0.0;
  int nodes_per_axis = 0;  // rule at which the adaptive loop stopped
};

// Adaptive evaluation exposing the node count it converged at.
LfmQuadrature lfm_kernel_adaptive(double dt, double dt2, const LfmParams& params);

// Non-adaptive evaluation at a fixed per-axis node count.
double lfm_kernel_fixed(double dt, double dt2, const LfmParams& params, int nodes_per_axis);

// Filter parameters for one event: mu = sum_q shift_per_gram[q] * m_q and
// sigma = sum_q spread_per_gram[q] * m_q over the secondary components.
// `dosages` is the full Q-vector with the driving component first.
ConvFilter conv_filter(const Eigen::VectorXd& dosages, const ConvFilterParams& params);

// Closed-form convolution covariance
//   l / sqrt(l^2 + s^2 + s2^2) * exp(-0.5 (dt - dt2 - mu + mu2)^2 / (l^2 + s^2 + s2^2)).
double conv_kernel(double dt, double dt2, double mu, double sigma, double mu2, double sigma2,
                   double latent_lengthscale);

double conv_kernel(double dt, double dt2, const ConvFilter& f, const ConvFilter& f2,
                   double latent_lengthscale);

}  // namespace trc
