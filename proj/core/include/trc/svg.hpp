#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace trc::svg {

struct Series {
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  std::string label;
  double stroke_width = 1.5;
  bool dashed = false;
};

struct Band {
  std::vector<double> x, lower, upper;
  std::string color = "#1f77b4";
  double opacity = 0.2;
};

struct Points {
  std::vector<double> x, y;
  std::string color = "#444444";
  double radius = 1.6;
};

struct VerticalMarkers {
  std::vector<double> x;
  std::string color = "#cc3333";
  std::string label;
};

struct Chart {
  std::string title;
  std::string x_label, y_label;
  std::vector<Band> bands;
  std::vector<Series> series;
  std::vector<Points> points;
  std::vector<VerticalMarkers> markers;
  int width = 900;
  int height = 420;
};

std::string render_chart(const Chart& chart);

// Grayscale-to-blue heatmap of a matrix, row 0 on top.
std::string render_heatmap(const Eigen::MatrixXd& matrix, const std::string& title,
                           int size_px = 560);

}  // namespace trc::svg
