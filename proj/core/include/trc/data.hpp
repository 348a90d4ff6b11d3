#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace trc {

// One treatment event: all Q components share the event time and carry
// their own non-negative dosages (grams), driving component first.
struct MealEvent {
  double time = 0.0;  // hours from study start
  Eigen::VectorXd dosages;
};

struct PatientRecord {
  std::string id;
  std::vector<double> times;   // strictly increasing, hours
  std::vector<double> values;  // measured glucose, same length as times
  std::vector<MealEvent> meals;
};

struct Dataset {
  std::vector<std::string> components;  // dosage column names, driving first
  std::vector<PatientRecord> patients;

  int num_components() const { return static_cast<int>(components.size()); }
  int num_patients() const { return static_cast<int>(patients.size()); }
  int total_observations() const;
  int patient_index(const std::string& id) const;  // -1 when absent

  // Throws DataError on inconsistent shapes, non-finite values, negative
  // dosages, or non-increasing observation times.
  void validate() const;
};

// Flattened (patient, time) lexicographic row order used by every matrix.
struct RowInfo {
  int patient = 0;
  int obs = 0;
  double time = 0.0;
};

std::vector<RowInfo> flatten_rows(const Dataset& data);
Eigen::VectorXd flatten_values(const Dataset& data);

// Copy with observations restricted to begin <= t < end. Meals are kept:
// they are inputs, not outcomes, and the effect window masks them anyway.
Dataset filter_observations(const Dataset& data, double begin, double end);

// Copy that keeps only the driving component's dosages (carbs-only ablation).
Dataset keep_driving_component(const Dataset& data);

enum class Centering { Mean, ZScore };

// Per-patient affine transform fitted on the training period only.
struct CenterTransform {
  Centering mode = Centering::Mean;
  double train_end = 0.0;
  std::vector<double> offset;  // per patient
  std::vector<double> scale;   // per patient, 1 for Mean
};

CenterTransform fit_centering(const Dataset& data, Centering mode, double train_end);
Dataset apply_centering(const Dataset& data, const CenterTransform& transform);
double uncenter_value(const CenterTransform& transform, int patient, double value);
double uncenter_spread(const CenterTransform& transform, int patient, double spread);

}  // namespace trc
