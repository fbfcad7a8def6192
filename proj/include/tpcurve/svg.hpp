#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tpcurve/io.hpp"
#include "tpcurve/types.hpp"

namespace tpc {

namespace detail {

inline std::string svg_header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_g17(w) + "\" height=\"" +
         format_g17(h) + "\" viewBox=\"0 0 " + format_g17(w) + " " + format_g17(h) + "\">\n";
}

}  // namespace detail

// Plain curve plot: the polyline drawn into a fixed frame (3D input is
// projected onto the first two coordinates).
template <typename Scalar>
void svg_curve(const std::string& path, const PolylineT<Scalar>& p, double size = 480) {
  const double pad = 20;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    xmin = std::min(xmin, static_cast<double>(p.points(0, i)));
    xmax = std::max(xmax, static_cast<double>(p.points(0, i)));
    ymin = std::min(ymin, static_cast<double>(p.points(1, i)));
    ymax = std::max(ymax, static_cast<double>(p.points(1, i)));
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  auto sx = [&](double x) { return pad + (x - xmin) / span * (size - 2 * pad); };
  auto sy = [&](double y) { return size - pad - (y - ymin) / span * (size - 2 * pad); };

  std::string s = detail::svg_header(size, size);
  s += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    s += format_g17(sx(static_cast<double>(p.points(0, i)))) + "," +
         format_g17(sy(static_cast<double>(p.points(1, i)))) + " ";
  }
  if (p.closed && p.size() > 0)
    s += format_g17(sx(static_cast<double>(p.points(0, 0)))) + "," +
         format_g17(sy(static_cast<double>(p.points(1, 0))));
  s += "\"/>\n</svg>\n";
  write_text_file(path, s);
}

// Scatter-plus-line plot of (x, y) series, optionally on log-log axes.
// Used for beta decay, refinement trends and flow energy curves.
inline void svg_series(const std::string& path, const std::vector<double>& xs,
                       const std::vector<double>& ys, const std::string& xlabel,
                       const std::string& ylabel, bool loglog = false, double w = 560,
                       double h = 420) {
  const double pad = 48;
  std::vector<double> px(xs), py(ys);
  if (loglog) {
    for (auto& v : px) v = std::log10(std::max(v, 1e-300));
    for (auto& v : py) v = std::log10(std::max(v, 1e-300));
  }
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (double v : px) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (double v : py) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;
  auto sx = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
  auto sy = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };

  std::string s = detail::svg_header(w, h);
  // axes
  s += "<line x1=\"" + format_g17(pad) + "\" y1=\"" + format_g17(h - pad) + "\" x2=\"" +
       format_g17(w - pad) + "\" y2=\"" + format_g17(h - pad) +
       "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + format_g17(pad) + "\" y1=\"" + format_g17(pad) + "\" x2=\"" +
       format_g17(pad) + "\" y2=\"" + format_g17(h - pad) +
       "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s += "<text x=\"" + format_g17(w / 2) + "\" y=\"" + format_g17(h - 10) +
       "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel + (loglog ? " (log10)" : "") +
       "</text>\n";
  s += "<text x=\"14\" y=\"" + format_g17(h / 2) +
       "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       format_g17(h / 2) + ")\">" + ylabel + (loglog ? " (log10)" : "") + "</text>\n";
  // polyline through the points
  s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < px.size(); ++i)
    s += format_g17(sx(px[i])) + "," + format_g17(sy(py[i])) + " ";
  s += "\"/>\n";
  for (std::size_t i = 0; i < px.size(); ++i)
    s += "<circle cx=\"" + format_g17(sx(px[i])) + "\" cy=\"" + format_g17(sy(py[i])) +
         "\" r=\"3\" fill=\"crimson\"/>\n";
  s += "</svg>\n";
  write_text_file(path, s);
}

}  // namespace tpc
