#include "trc/metrics.hpp"

#include <cmath>
#include <numbers>

#include "trc/errors.hpp"

namespace trc {

MetricSummary compute_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                              const Eigen::VectorXd& variance) {
  if (y.size() != mean.size() || y.size() != variance.size()) {
    throw DataError("compute_metrics: input length mismatch");
  }
  if (y.size() == 0) throw DataError("compute_metrics: no points to evaluate");
  if ((variance.array() <= 0.0).any()) {
    throw DataError("compute_metrics: predictive variance must be positive");
  }
  const Eigen::ArrayXd residual = (y - mean).array();
  MetricSummary s;
  s.count = static_cast<int>(y.size());
  s.rmse = std::sqrt(residual.square().mean());
  s.mae = residual.abs().mean();
  s.mnll = (0.5 * (2.0 * std::numbers::pi * variance.array()).log() +
            residual.square() / (2.0 * variance.array()))
               .mean();
  return s;
}

namespace {

void mean_and_se(const std::vector<double>& values, double& mean, double& se) {
  const auto n = static_cast<double>(values.size());
  mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

MetricReport compute_metric_report(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                                   const Eigen::VectorXd& variance,
                                   const std::vector<int>& patient_of_point,
                                   const std::vector<std::string>& patient_ids) {
  if (static_cast<Eigen::Index>(patient_of_point.size()) != y.size()) {
    throw DataError("compute_metric_report: patient index length mismatch");
  }
  MetricReport report;
  report.pooled = compute_metrics(y, mean, variance);
  report.patient_ids = patient_ids;

  std::vector<double> rmse_values, mae_values, mnll_values;
  for (int i = 0; i < static_cast<int>(patient_ids.size()); ++i) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      if (patient_of_point[static_cast<std::size_t>(k)] == i) idx.push_back(k);
    }
    if (idx.empty()) {
      throw DataError("compute_metric_report: patient " + patient_ids[i] + " has no points");
    }
    Eigen::VectorXd yp(idx.size()), mp(idx.size()), vp(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      yp[static_cast<Eigen::Index>(k)] = y[idx[k]];
      mp[static_cast<Eigen::Index>(k)] = mean[idx[k]];
      vp[static_cast<Eigen::Index>(k)] = variance[idx[k]];
    }
    const MetricSummary s = compute_metrics(yp, mp, vp);
    report.per_patient.push_back(s);
    rmse_values.push_back(s.rmse);
    mae_values.push_back(s.mae);
    mnll_values.push_back(s.mnll);
  }

  mean_and_se(rmse_values, report.rmse_mean, report.rmse_se);
  mean_and_se(mae_values, report.mae_mean, report.mae_se);
  mean_and_se(mnll_values, report.mnll_mean, report.mnll_se);
  return report;
}

}  // namespace trc
