#include "trc/data.hpp"

#include <cmath>
#include <numeric>

#include "trc/errors.hpp"

namespace trc {

int Dataset::total_observations() const {
  int n = 0;
  for (const auto& p : patients) n += static_cast<int>(p.times.size());
  return n;
}

int Dataset::patient_index(const std::string& id) const {
  for (int i = 0; i < num_patients(); ++i) {
    if (patients[i].id == id) return i;
  }
  return -1;
}

void Dataset::validate() const {
  if (components.empty()) throw DataError("dataset has no treatment components");
  const auto q = static_cast<Eigen::Index>(components.size());
  for (const auto& p : patients) {
    if (p.times.size() != p.values.size()) {
      throw DataError("patient " + p.id + ": times/values length mismatch");
    }
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      if (!std::isfinite(p.times[k]) || !std::isfinite(p.values[k])) {
        throw DataError("patient " + p.id + ": non-finite observation");
      }
      if (k > 0 && !(p.times[k] > p.times[k - 1])) {
        throw DataError("patient " + p.id + ": observation times not strictly increasing at t=" +
                        std::to_string(p.times[k]));
      }
    }
    for (const auto& meal : p.meals) {
      if (!std::isfinite(meal.time)) throw DataError("patient " + p.id + ": non-finite meal time");
      if (meal.dosages.size() != q) {
        throw DataError("patient " + p.id + ": meal dosage count differs from component count");
      }
      for (Eigen::Index j = 0; j < q; ++j) {
        if (!(meal.dosages[j] >= 0.0) || !std::isfinite(meal.dosages[j])) {
          throw DataError("patient " + p.id + ": negative or non-finite dosage");
        }
      }
    }
  }
}

std::vector<RowInfo> flatten_rows(const Dataset& data) {
  std::vector<RowInfo> rows;
  rows.reserve(data.total_observations());
  for (int i = 0; i < data.num_patients(); ++i) {
    const auto& p = data.patients[i];
    for (int k = 0; k < static_cast<int>(p.times.size()); ++k) {
      rows.push_back({i, k, p.times[k]});
    }
  }
  return rows;
}

Eigen::VectorXd flatten_values(const Dataset& data) {
  Eigen::VectorXd y(data.total_observations());
  Eigen::Index r = 0;
  for (const auto& p : data.patients) {
    for (double v : p.values) y[r++] = v;
  }
  return y;
}

Dataset filter_observations(const Dataset& data, double begin, double end) {
  Dataset out;
  out.components = data.components;
  out.patients.reserve(data.patients.size());
  for (const auto& p : data.patients) {
    PatientRecord r;
    r.id = p.id;
    r.meals = p.meals;
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      if (p.times[k] >= begin && p.times[k] < end) {
        r.times.push_back(p.times[k]);
        r.values.push_back(p.values[k]);
      }
    }
    out.patients.push_back(std::move(r));
  }
  return out;
}

Dataset keep_driving_component(const Dataset& data) {
  Dataset out;
  out.components = {data.components.front()};
  out.patients = data.patients;
  for (auto& p : out.patients) {
    for (auto& meal : p.meals) {
      meal.dosages = meal.dosages.head(1).eval();
    }
  }
  return out;
}

CenterTransform fit_centering(const Dataset& data, Centering mode, double train_end) {
  CenterTransform t;
  t.mode = mode;
  t.train_end = train_end;
  t.offset.resize(data.patients.size(), 0.0);
  t.scale.resize(data.patients.size(), 1.0);
  for (std::size_t i = 0; i < data.patients.size(); ++i) {
    const auto& p = data.patients[i];
    double sum = 0.0;
    int n = 0;
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      if (p.times[k] < train_end) {
        sum += p.values[k];
        ++n;
      }
    }
    if (n == 0) throw DataError("patient " + p.id + ": no observations in the training period");
    const double mean = sum / n;
    t.offset[i] = mean;
    if (mode == Centering::ZScore) {
      double ss = 0.0;
      for (std::size_t k = 0; k < p.times.size(); ++k) {
        if (p.times[k] < train_end) ss += (p.values[k] - mean) * (p.values[k] - mean);
      }
      const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
      if (!(sd > 0.0)) {
        throw DataError("patient " + p.id + ": zero variance in the training period");
      }
      t.scale[i] = sd;
    }
  }
  return t;
}

Dataset apply_centering(const Dataset& data, const CenterTransform& transform) {
  if (transform.offset.size() != data.patients.size()) {
    throw DataError("centering transform does not match the dataset's patients");
  }
  Dataset out = data;
  for (std::size_t i = 0; i < out.patients.size(); ++i) {
    for (auto& v : out.patients[i].values) {
      v = (v - transform.offset[i]) / transform.scale[i];
    }
  }
  return out;
}

double uncenter_value(const CenterTransform& transform, int patient, double value) {
  return value * transform.scale[patient] + transform.offset[patient];
}

double uncenter_spread(const CenterTransform& transform, int patient, double spread) {
  return spread * transform.scale[patient];
}

}  // namespace trc
