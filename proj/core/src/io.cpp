#include "trc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "trc/errors.hpp"
#include "trc/training.hpp"

namespace trc {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_double(const std::string& text, const std::string& file, int line_no) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError(file + ":" + std::to_string(line_no) + ": cannot parse number '" + text +
                    "'");
  }
  return value;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file " + path);
  return in;
}

std::ofstream create_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot create file " + path);
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

Dataset read_dataset(const std::string& glucose_csv, const std::string& meals_csv) {
  Dataset data;

  // Meals first: the header fixes the component schema.
  {
    std::ifstream in = open_or_throw(meals_csv);
    std::string line;
    if (!std::getline(in, line)) throw DataError(meals_csv + ": empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "patient_id" || header[1] != "time_h") {
      throw DataError(meals_csv + ": header must start with patient_id,time_h");
    }
    if (header[2] != "carbs_g") {
      throw DataError(meals_csv +
                      ": first dosage column must be carbs_g (driving component first)");
    }
    for (std::size_t c = 2; c < header.size(); ++c) {
      const std::string& name = header[c];
      if (name.size() < 3 || name.substr(name.size() - 2) != "_g") {
        throw DataError(meals_csv + ": dosage column '" + name + "' must end in _g");
      }
      data.components.push_back(name.substr(0, name.size() - 2));
    }

    std::map<std::string, std::vector<MealEvent>> meals;
    int line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != header.size()) {
        throw DataError(meals_csv + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(fields.size()));
      }
      MealEvent meal;
      meal.time = parse_double(fields[1], meals_csv, line_no);
      meal.dosages.resize(static_cast<Eigen::Index>(data.components.size()));
      for (std::size_t c = 2; c < fields.size(); ++c) {
        const double g = parse_double(fields[c], meals_csv, line_no);
        if (g < 0.0) {
          throw DataError(meals_csv + ":" + std::to_string(line_no) + ": negative dosage");
        }
        meal.dosages[static_cast<Eigen::Index>(c - 2)] = g;
      }
      meals[fields[0]].push_back(std::move(meal));
    }
    for (auto& [id, list] : meals) {
      std::sort(list.begin(), list.end(),
                [](const MealEvent& a, const MealEvent& b) { return a.time < b.time; });
      PatientRecord rec;
      rec.id = id;
      rec.meals = std::move(list);
      data.patients.push_back(std::move(rec));
    }
  }

  {
    std::ifstream in = open_or_throw(glucose_csv);
    std::string line;
    if (!std::getline(in, line)) throw DataError(glucose_csv + ": empty file");
    const auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "patient_id" || header[1] != "time_h" ||
        header[2] != "glucose") {
      throw DataError(glucose_csv + ": header must be patient_id,time_h,glucose");
    }
    int line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != 3) {
        throw DataError(glucose_csv + ":" + std::to_string(line_no) +
                        ": expected 3 fields, found " + std::to_string(fields.size()));
      }
      int idx = data.patient_index(fields[0]);
      if (idx < 0) {
        PatientRecord rec;
        rec.id = fields[0];
        data.patients.push_back(std::move(rec));
        idx = data.num_patients() - 1;
      }
      auto& rec = data.patients[static_cast<std::size_t>(idx)];
      const double t = parse_double(fields[1], glucose_csv, line_no);
      const double v = parse_double(fields[2], glucose_csv, line_no);
      if (!rec.times.empty()) {
        if (t == rec.times.back()) {
          throw DataError(glucose_csv + ":" + std::to_string(line_no) +
                          ": duplicate timestamp for patient " + rec.id);
        }
        if (t < rec.times.back()) {
          throw DataError(glucose_csv + ":" + std::to_string(line_no) +
                          ": non-increasing time for patient " + rec.id);
        }
      }
      rec.times.push_back(t);
      rec.values.push_back(v);
    }
  }

  std::sort(data.patients.begin(), data.patients.end(),
            [](const PatientRecord& a, const PatientRecord& b) { return a.id < b.id; });
  data.validate();
  return data;
}

void write_glucose_csv(const std::string& path, const Dataset& data) {
  std::ofstream out = create_or_throw(path);
  out << "patient_id,time_h,glucose\n";
  for (const auto& p : data.patients) {
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      out << p.id << ',' << format_double(p.times[k]) << ',' << format_double(p.values[k])
          << '\n';
    }
  }
}

void write_meals_csv(const std::string& path, const Dataset& data) {
  std::ofstream out = create_or_throw(path);
  out << "patient_id,time_h";
  for (const auto& c : data.components) out << ',' << c << "_g";
  out << '\n';
  for (const auto& p : data.patients) {
    for (const auto& meal : p.meals) {
      out << p.id << ',' << format_double(meal.time);
      for (Eigen::Index c = 0; c < meal.dosages.size(); ++c) {
        out << ',' << format_double(meal.dosages[c]);
      }
      out << '\n';
    }
  }
}

void write_truth_csv(const std::string& path, const SimResult& sim) {
  std::ofstream out = create_or_throw(path);
  const int blocks = static_cast<int>(sim.truth.component.empty()
                                          ? 0
                                          : sim.truth.component.front().size());
  out << "patient_id,time_h,baseline";
  for (int b = 0; b < blocks; ++b) out << ",comp_" << (b + 1);
  out << ",total\n";
  for (int i = 0; i < sim.data.num_patients(); ++i) {
    const auto& p = sim.data.patients[i];
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      out << p.id << ',' << format_double(p.times[k]) << ','
          << format_double(sim.truth.baseline[i][row]);
      for (int b = 0; b < blocks; ++b) {
        out << ',' << format_double(sim.truth.component[i][static_cast<std::size_t>(b)][row]);
      }
      out << ',' << format_double(sim.truth.total[i][row]) << '\n';
    }
  }
}

namespace {

json grid_to_json(const GridPoint& g) {
  json j;
  j["window"] = g.window;
  j["driving_lengthscale"] = g.driving_lengthscale;
  if (std::isfinite(g.secondary_lengthscale)) {
    j["secondary_lengthscale"] = g.secondary_lengthscale;
  }
  j["baseline_lengthscale"] = g.baseline_lengthscale;
  return j;
}

GridPoint grid_from_json(const json& j) {
  GridPoint g;
  g.window = j.at("window").get<double>();
  g.driving_lengthscale = j.at("driving_lengthscale").get<double>();
  g.secondary_lengthscale = j.contains("secondary_lengthscale")
                                ? j["secondary_lengthscale"].get<double>()
                                : std::numeric_limits<double>::quiet_NaN();
  g.baseline_lengthscale = j.at("baseline_lengthscale").get<double>();
  return g;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Eigen::MatrixXd();
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

}  // namespace

void save_fitted_model(const std::string& path, const FittedModel& model) {
  json j;
  j["model"] = model_kind_name(model.kind);
  j["patients"] = model.patient_ids;
  j["components"] = model.components;
  j["grid"] = grid_to_json(model.grid);
  j["train_hours"] = model.train_hours;
  j["centering"] = {
      {"mode", model.transform.mode == Centering::Mean ? "mean" : "zscore"},
      {"train_end", model.transform.train_end},
      {"offset", model.transform.offset},
      {"scale", model.transform.scale},
  };
  json diag;
  if (std::isfinite(model.diagnostics.log_marginal)) {
    diag["log_marginal"] = model.diagnostics.log_marginal;
  }
  if (std::isfinite(model.diagnostics.jitter)) diag["jitter"] = model.diagnostics.jitter;
  if (std::isfinite(model.diagnostics.condition)) {
    diag["condition"] = model.diagnostics.condition;
  }
  j["diagnostics"] = std::move(diag);
  if (is_gp_model(model.kind)) {
    json g;
    g["window"] = model.gp.window;
    g["baseline"] = {{"lengthscale", model.gp.baseline.lengthscale},
                     {"variance", model.gp.baseline.variance}};
    g["weights"] = matrix_to_json(model.gp.coreg.weights);
    g["meal_noise"] = vector_to_json(model.gp.coreg.meal_noise);
    g["lengthscales"] = model.gp.lengthscales;
    g["decay"] = model.gp.decay;
    g["sensitivity"] = model.gp.sensitivity;
    g["shift_per_gram"] = model.gp.shift_per_gram;
    g["spread_per_gram"] = model.gp.spread_per_gram;
    g["noise_variance"] = model.gp.noise_variance;
    g["lfm_quad_nodes"] = model.gp.lfm_quad_nodes;
    j["gp"] = std::move(g);
  } else {
    json b;
    b["magnitude"] = matrix_to_json(model.bell.magnitude);
    b["width"] = matrix_to_json(model.bell.width);
    b["width_coupling"] = vector_to_json(model.bell.width_coupling);
    b["mag_log_mean"] = vector_to_json(model.bell.mag_log_mean);
    b["mag_log_sd"] = vector_to_json(model.bell.mag_log_sd);
    b["width_log_mean"] = vector_to_json(model.bell.width_log_mean);
    b["width_log_sd"] = vector_to_json(model.bell.width_log_sd);
    b["noise_variance"] = model.bell.noise_variance;
    j["bell"] = std::move(b);
  }
  std::ofstream out = create_or_throw(path);
  out << j.dump(2) << '\n';
}

FittedModel load_fitted_model(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON (" + e.what() + ")");
  }
  try {
    FittedModel model;
    model.kind = parse_model_kind(j.at("model").get<std::string>());
    model.patient_ids = j.at("patients").get<std::vector<std::string>>();
    model.components = j.at("components").get<std::vector<std::string>>();
    model.grid = grid_from_json(j.at("grid"));
    model.train_hours = j.value("train_hours", 48.0);
    const json& c = j.at("centering");
    model.transform.mode =
        c.at("mode").get<std::string>() == "zscore" ? Centering::ZScore : Centering::Mean;
    model.transform.train_end = c.at("train_end").get<double>();
    model.transform.offset = c.at("offset").get<std::vector<double>>();
    model.transform.scale = c.at("scale").get<std::vector<double>>();
    if (j.contains("diagnostics")) {
      model.diagnostics.log_marginal = j["diagnostics"].value("log_marginal", 0.0);
      model.diagnostics.jitter = j["diagnostics"].value("jitter", 0.0);
      model.diagnostics.condition = j["diagnostics"].value("condition", 0.0);
    }
    if (is_gp_model(model.kind)) {
      const json& g = j.at("gp");
      model.gp.kind = model.kind;
      model.gp.window = g.at("window").get<double>();
      model.gp.baseline.lengthscale = g.at("baseline").at("lengthscale").get<double>();
      model.gp.baseline.variance = g.at("baseline").at("variance").get<double>();
      model.gp.coreg.weights = matrix_from_json(g.at("weights"));
      model.gp.coreg.meal_noise = vector_from_json(g.at("meal_noise"));
      model.gp.lengthscales = g.at("lengthscales").get<std::vector<double>>();
      model.gp.decay = g.at("decay").get<std::vector<double>>();
      model.gp.sensitivity = g.at("sensitivity").get<std::vector<double>>();
      model.gp.shift_per_gram = g.at("shift_per_gram").get<std::vector<double>>();
      model.gp.spread_per_gram = g.at("spread_per_gram").get<std::vector<double>>();
      model.gp.noise_variance = g.at("noise_variance").get<double>();
      model.gp.lfm_quad_nodes = g.value("lfm_quad_nodes", 32);
    } else {
      const json& b = j.at("bell");
      model.bell.kind = model.kind;
      model.bell.magnitude = matrix_from_json(b.at("magnitude"));
      model.bell.width = matrix_from_json(b.at("width"));
      model.bell.width_coupling = vector_from_json(b.at("width_coupling"));
      model.bell.mag_log_mean = vector_from_json(b.at("mag_log_mean"));
      model.bell.mag_log_sd = vector_from_json(b.at("mag_log_sd"));
      model.bell.width_log_mean = vector_from_json(b.at("width_log_mean"));
      model.bell.width_log_sd = vector_from_json(b.at("width_log_sd"));
      model.bell.noise_variance = b.at("noise_variance").get<double>();
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(path + ": malformed fitted-model file (" + std::string(e.what()) + ")");
  }
}

GridPoint load_grid_point(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON (" + e.what() + ")");
  }
  try {
    return grid_from_json(j.contains("selected") ? j["selected"] : j);
  } catch (const json::exception& e) {
    throw DataError(path + ": malformed grid point (" + std::string(e.what()) + ")");
  }
}

void save_grid_point(const std::string& path, const GridPoint& point, ModelKind kind) {
  json j;
  j["model"] = model_kind_name(kind);
  j["selected"] = grid_to_json(point);
  std::ofstream out = create_or_throw(path);
  out << j.dump(2) << '\n';
}

HyperGrid load_hyper_grid(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON (" + e.what() + ")");
  }
  HyperGrid grid;
  try {
    if (j.contains("window")) grid.window = j["window"].get<std::vector<double>>();
    if (j.contains("driving_lengthscale")) {
      grid.driving_lengthscale = j["driving_lengthscale"].get<std::vector<double>>();
    }
    if (j.contains("secondary_lengthscale")) {
      grid.secondary_lengthscale = j["secondary_lengthscale"].get<std::vector<double>>();
    }
    if (j.contains("baseline_lengthscale")) {
      grid.baseline_lengthscale = j["baseline_lengthscale"].get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": malformed grid file (" + std::string(e.what()) + ")");
  }
  return grid;
}

}  // namespace trc
