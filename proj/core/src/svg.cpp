#include "trc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "trc/errors.hpp"

namespace trc::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Extent {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
};

double nice_step(double range, int target_ticks) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_chart(const Chart& chart) {
  Extent ext;
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) ext.add(s.x[i], s.y[i]);
  }
  for (const auto& b : chart.bands) {
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      ext.add(b.x[i], b.lower[i]);
      ext.add(b.x[i], b.upper[i]);
    }
  }
  for (const auto& p : chart.points) {
    for (std::size_t i = 0; i < p.x.size(); ++i) ext.add(p.x[i], p.y[i]);
  }
  for (const auto& m : chart.markers) {
    for (double x : m.x) ext.add(x, ext.y_min < ext.y_max ? ext.y_min : 0.0);
  }
  if (!(ext.x_min < ext.x_max)) {
    ext.x_min -= 1.0;
    ext.x_max += 1.0;
  }
  if (!(ext.y_min < ext.y_max)) {
    ext.y_min -= 1.0;
    ext.y_max += 1.0;
  }
  const double y_pad = 0.05 * (ext.y_max - ext.y_min);
  ext.y_min -= y_pad;
  ext.y_max += y_pad;

  const double ml = 56, mr = 16, mt = 34, mb = 44;
  const double pw = chart.width - ml - mr;
  const double ph = chart.height - mt - mb;
  const auto px = [&](double x) { return ml + pw * (x - ext.x_min) / (ext.x_max - ext.x_min); };
  const auto py = [&](double y) { return mt + ph * (ext.y_max - y) / (ext.y_max - ext.y_min); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\""
      << chart.height << "\" viewBox=\"0 0 " << chart.width << " " << chart.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!chart.title.empty()) {
    out << "<text x=\"" << chart.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << chart.title << "</text>\n";
  }

  // Axes and ticks.
  const double x_step = nice_step(ext.x_max - ext.x_min, 8);
  const double y_step = nice_step(ext.y_max - ext.y_min, 6);
  out << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#333\">\n";
  for (double x = std::ceil(ext.x_min / x_step) * x_step; x <= ext.x_max + 1e-9; x += x_step) {
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(px(x))
        << "\" y2=\"" << num(mt + ph) << "\" stroke=\"#e0e0e0\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(mt + ph + 14)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  for (double y = std::ceil(ext.y_min / y_step) * y_step; y <= ext.y_max + 1e-9; y += y_step) {
    out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(ml + pw)
        << "\" y2=\"" << num(py(y)) << "\" stroke=\"#e0e0e0\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(py(y) + 3)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  out << "</g>\n";
  out << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (const auto& b : chart.bands) {
    out << "<polygon fill=\"" << b.color << "\" fill-opacity=\"" << b.opacity
        << "\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      out << num(px(b.x[i])) << ',' << num(py(b.upper[i])) << ' ';
    }
    for (std::size_t i = b.x.size(); i-- > 0;) {
      out << num(px(b.x[i])) << ',' << num(py(b.lower[i])) << ' ';
    }
    out << "\"/>\n";
  }

  for (const auto& m : chart.markers) {
    for (double x : m.x) {
      if (x < ext.x_min || x > ext.x_max) continue;
      out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(px(x))
          << "\" y2=\"" << num(mt + ph) << "\" stroke=\"" << m.color
          << "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    }
  }

  for (const auto& s : chart.series) {
    if (s.x.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\""
        << s.stroke_width << "\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
  }

  for (const auto& p : chart.points) {
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      out << "<circle cx=\"" << num(px(p.x[i])) << "\" cy=\"" << num(py(p.y[i])) << "\" r=\""
          << p.radius << "\" fill=\"" << p.color << "\" fill-opacity=\"0.6\"/>\n";
    }
  }

  // Legend.
  double ly = mt + 12;
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& s : chart.series) {
    if (s.label.empty()) continue;
    out << "<line x1=\"" << num(ml + 8) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
        << num(ml + 28) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(ml + 32) << "\" y=\"" << num(ly) << "\">" << s.label
        << "</text>\n";
    ly += 15;
  }
  for (const auto& m : chart.markers) {
    if (m.label.empty()) continue;
    out << "<line x1=\"" << num(ml + 8) << "\" y1=\"" << num(ly - 8) << "\" x2=\""
        << num(ml + 8) << "\" y2=\"" << num(ly) << "\" stroke=\"" << m.color
        << "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << num(ml + 32) << "\" y=\"" << num(ly) << "\">" << m.label
        << "</text>\n";
    ly += 15;
  }
  out << "</g>\n";

  if (!chart.x_label.empty()) {
    out << "<text x=\"" << chart.width / 2 << "\" y=\"" << chart.height - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << chart.x_label << "</text>\n";
  }
  if (!chart.y_label.empty()) {
    out << "<text x=\"14\" y=\"" << chart.height / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 14 " << chart.height / 2 << ")\">" << chart.y_label
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_heatmap(const Eigen::MatrixXd& matrix, const std::string& title,
                           int size_px) {
  if (matrix.size() == 0) throw DataError("render_heatmap: empty matrix");
  const double lo = matrix.minCoeff();
  const double hi = matrix.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;

  const int margin = 30;
  const double cell_w = static_cast<double>(size_px) / matrix.cols();
  const double cell_h = static_cast<double>(size_px) / matrix.rows();

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px + 2 * margin
      << "\" height=\"" << size_px + 2 * margin + 20 << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << margin << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
      << title << "</text>\n";
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      const double t = (matrix(r, c) - lo) / span;
      const int red = static_cast<int>(255 * (1.0 - t));
      const int green = static_cast<int>(255 * (1.0 - 0.6 * t));
      out << "<rect x=\"" << num(margin + c * cell_w) << "\" y=\"" << num(margin + 20 + r * cell_h)
          << "\" width=\"" << num(cell_w + 0.5) << "\" height=\"" << num(cell_h + 0.5)
          << "\" fill=\"rgb(" << red << ',' << green << ",255)\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace trc::svg
