#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace trc {

struct MetricSummary {
  double rmse = 0.0;
  double mae = 0.0;
  double mnll = 0.0;
  int count = 0;
};

// rmse = sqrt(mean (y - mu)^2), mae = mean |y - mu|,
// mnll = mean [0.5 log(2 pi s^2) + (y - mu)^2 / (2 s^2)].
// The predictive variance must include observation noise.
MetricSummary compute_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                              const Eigen::VectorXd& variance);

// Per-patient breakdown plus the across-patient mean +/- standard error
// reported alongside the pooled values.
struct MetricReport {
  MetricSummary pooled;
  std::vector<std::string> patient_ids;
  std::vector<MetricSummary> per_patient;
  double rmse_mean = 0.0, rmse_se = 0.0;
  double mae_mean = 0.0, mae_se = 0.0;
  double mnll_mean = 0.0, mnll_se = 0.0;
};

MetricReport compute_metric_report(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                                   const Eigen::VectorXd& variance,
                                   const std::vector<int>& patient_of_point,
                                   const std::vector<std::string>& patient_ids);

}  // namespace trc
