#pragma once

#include <string>
#include <vector>

#include "trc/covariance.hpp"
#include "trc/data.hpp"
#include "trc/rng.hpp"

namespace helpers {

// Small random dataset for assembly and inference checks: up to
// `max_patients` patients, `max_meals` meals each, `max_obs` observations
// total, over a 12-hour horizon.
inline trc::Dataset random_dataset(trc::Rng& rng, int max_patients = 3, int max_meals = 4,
                                   int max_obs = 20, int components = 2) {
  trc::Dataset data;
  for (int q = 0; q < components; ++q) data.components.push_back("c" + std::to_string(q + 1));
  const int patients = 1 + static_cast<int>(rng.integer(max_patients));
  const int total_obs = patients + static_cast<int>(rng.integer(max_obs - patients + 1));
  std::vector<int> per_patient(patients, 1);
  for (int k = patients; k < total_obs; ++k) {
    ++per_patient[static_cast<std::size_t>(rng.integer(patients))];
  }
  for (int i = 0; i < patients; ++i) {
    trc::PatientRecord rec;
    rec.id = "p" + std::to_string(i + 1);
    double t = rng.uniform(0.0, 0.5);
    for (int k = 0; k < per_patient[static_cast<std::size_t>(i)]; ++k) {
      rec.times.push_back(t);
      rec.values.push_back(rng.normal(0.0, 1.0));
      t += rng.uniform(0.25, 1.0);
    }
    const int meals = 1 + static_cast<int>(rng.integer(max_meals));
    for (int j = 0; j < meals; ++j) {
      trc::MealEvent meal;
      meal.time = rng.uniform(-1.0, 11.0);
      meal.dosages.resize(components);
      for (int q = 0; q < components; ++q) {
        meal.dosages[q] = rng.uniform(0.0, 60.0);
      }
      rec.meals.push_back(meal);
    }
    std::sort(rec.meals.begin(), rec.meals.end(),
              [](const trc::MealEvent& a, const trc::MealEvent& b) { return a.time < b.time; });
    data.patients.push_back(std::move(rec));
  }
  data.validate();
  return data;
}

// Random but valid parameters for a model kind, sized to the dataset.
inline trc::ModelParams random_params(trc::Rng& rng, trc::ModelKind kind,
                                      const trc::Dataset& data) {
  trc::ModelParams p = trc::default_params(kind, data.num_patients(), data.num_components());
  p.window = rng.uniform(2.0, 3.5);
  p.baseline.lengthscale = rng.uniform(4.0, 14.0);
  p.baseline.variance = rng.uniform(0.1, 1.0);
  for (int i = 0; i < data.num_patients(); ++i) {
    for (int q = 0; q < data.num_components(); ++q) {
      p.coreg.weights(i, q) = rng.uniform(0.005, 0.08);
    }
  }
  for (Eigen::Index b = 0; b < p.coreg.meal_noise.size(); ++b) {
    p.coreg.meal_noise[b] = rng.uniform(0.0, 0.05);
  }
  for (std::size_t q = 0; q < p.lengthscales.size(); ++q) {
    p.lengthscales[q] = rng.uniform(0.25, q == 0 ? 0.5 : 0.9);
  }
  if (kind == trc::ModelKind::GpLfm) {
    for (std::size_t q = 0; q < p.decay.size(); ++q) {
      p.decay[q] = rng.uniform(0.5, 2.0);
      p.sensitivity[q] = rng.uniform(0.5, 1.5);
    }
  }
  if (kind == trc::ModelKind::GpConv) {
    for (std::size_t q = 0; q < p.shift_per_gram.size(); ++q) {
      p.shift_per_gram[q] = rng.uniform(0.0, 0.08);
      p.spread_per_gram[q] = rng.uniform(0.0, 0.04);
    }
  }
  p.noise_variance = rng.uniform(0.05, 0.3);
  return p;
}

}  // namespace helpers
