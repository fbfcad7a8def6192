#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tpcurve/types.hpp"

namespace tpc {

enum class ShapeKind {
  circle,
  k_circle,
  regular_polygon,
  torus_knot,
  stadium,
  power_graph,
  perturbed_circle,
};

inline ShapeKind shape_kind_from_string(const std::string& s) {
  if (s == "circle") return ShapeKind::circle;
  if (s == "k_circle") return ShapeKind::k_circle;
  if (s == "regular_polygon") return ShapeKind::regular_polygon;
  if (s == "torus_knot") return ShapeKind::torus_knot;
  if (s == "stadium") return ShapeKind::stadium;
  if (s == "power_graph") return ShapeKind::power_graph;
  if (s == "perturbed_circle") return ShapeKind::perturbed_circle;
  throw std::invalid_argument("unknown shape kind: " + s);
}

inline std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::circle: return "circle";
    case ShapeKind::k_circle: return "k_circle";
    case ShapeKind::regular_polygon: return "regular_polygon";
    case ShapeKind::torus_knot: return "torus_knot";
    case ShapeKind::stadium: return "stadium";
    case ShapeKind::power_graph: return "power_graph";
    case ShapeKind::perturbed_circle: return "perturbed_circle";
  }
  return "?";
}

// Model-curve request: a kind plus named parameters. Parameter ranges are
// validated per kind when the curve is generated.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::circle;
  std::map<std::string, double> params;

  double get(const std::string& name, double fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  }

  int get_int(const std::string& name, int fallback) const {
    return static_cast<int>(std::llround(get(name, fallback)));
  }
};

namespace detail {

inline void require(bool ok, const std::string& param, const std::string& why) {
  if (!ok) throw std::invalid_argument("shape parameter '" + param + "' invalid: " + why);
}

}  // namespace detail

// Samples the requested model shape as a Polyline. power_graph is open, all
// other kinds are closed.
template <typename Scalar = double>
PolylineT<Scalar> generate(const ShapeSpec& spec) {
  using std::numbers::pi;
  const int samples = spec.get_int("samples", 256);
  detail::require(samples >= 3, "samples", "need at least 3");

  PolylineT<Scalar> out;
  out.closed = true;

  switch (spec.kind) {
    case ShapeKind::circle: {
      const double r = spec.get("radius", 1.0);
      detail::require(r > 0, "radius", "must be positive");
      out.points.resize(2, samples);
      for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * pi * i / samples;
        out.points.col(i) << Scalar(r * std::cos(th)), Scalar(r * std::sin(th));
      }
      break;
    }
    case ShapeKind::k_circle: {
      const double r = spec.get("radius", 1.0);
      const int k = spec.get_int("k", 2);
      detail::require(r > 0, "radius", "must be positive");
      detail::require(k >= 1, "k", "cover count must be >= 1");
      out.points.resize(2, samples);
      for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * pi * k * i / samples;
        out.points.col(i) << Scalar(r * std::cos(th)), Scalar(r * std::sin(th));
      }
      break;
    }
    case ShapeKind::regular_polygon: {
      const int v = spec.get_int("vertices", 4);
      const double r = spec.get("radius", 1.0);
      detail::require(v >= 3, "vertices", "must be >= 3");
      detail::require(r > 0, "radius", "must be positive");
      detail::require(samples % v == 0, "samples", "must be a multiple of the vertex count");
      const int per_edge = samples / v;
      out.points.resize(2, samples);
      int idx = 0;
      for (int e = 0; e < v; ++e) {
        const double a0 = 2.0 * pi * e / v, a1 = 2.0 * pi * (e + 1) / v;
        Eigen::Vector2d p0(r * std::cos(a0), r * std::sin(a0));
        Eigen::Vector2d p1(r * std::cos(a1), r * std::sin(a1));
        for (int j = 0; j < per_edge; ++j) {
          const double t = static_cast<double>(j) / per_edge;
          out.points.col(idx++) = (p0 + t * (p1 - p0)).cast<Scalar>();
        }
      }
      break;
    }
    case ShapeKind::torus_knot: {
      const int p = spec.get_int("p", 2);
      const int q = spec.get_int("q", 3);
      const double R = spec.get("major_radius", 3.0);
      const double r = spec.get("minor_radius", 1.0);
      detail::require(p >= 1 && q >= 1, "p", "knot indices must be >= 1");
      detail::require(std::gcd(p, q) == 1, "p", "knot indices must be coprime");
      detail::require(R > r && r > 0, "major_radius", "need major > minor > 0");
      out.points.resize(3, samples);
      for (int i = 0; i < samples; ++i) {
        const double t = 2.0 * pi * i / samples;
        const double w = R + r * std::cos(q * t);
        out.points.col(i) << Scalar(w * std::cos(p * t)), Scalar(w * std::sin(p * t)),
            Scalar(r * std::sin(q * t));
      }
      break;
    }
    case ShapeKind::stadium: {
      const double r = spec.get("radius", 1.0);
      const double straight = spec.get("straight", 2.0);
      detail::require(r > 0, "radius", "must be positive");
      detail::require(straight > 0, "straight", "must be positive");
      const double L = 2.0 * straight + 2.0 * pi * r;
      out.points.resize(2, samples);
      for (int i = 0; i < samples; ++i) {
        const double s = L * i / samples;
        double x, y;
        if (s < straight) {  // bottom straight, left to right
          x = -straight / 2 + s;
          y = -r;
        } else if (s < straight + pi * r) {  // right cap
          const double a = (s - straight) / r;
          x = straight / 2 + r * std::sin(a);
          y = -r * std::cos(a);
        } else if (s < 2 * straight + pi * r) {  // top straight, right to left
          x = straight / 2 - (s - straight - pi * r);
          y = r;
        } else {  // left cap
          const double a = (s - 2 * straight - pi * r) / r;
          x = -straight / 2 - r * std::sin(a);
          y = r * std::cos(a);
        }
        out.points.col(i) << Scalar(x), Scalar(y);
      }
      break;
    }
    case ShapeKind::power_graph: {
      const double a = spec.get("exponent", 1.5);
      detail::require(a > 1.0 && a <= 2.0, "exponent", "must lie in (1, 2]");
      out.closed = false;
      out.points.resize(2, samples);
      for (int i = 0; i < samples; ++i) {
        const double x = static_cast<double>(i) / (samples - 1);
        out.points.col(i) << Scalar(x), Scalar(std::pow(x, a));
      }
      break;
    }
    case ShapeKind::perturbed_circle: {
      const double r = spec.get("radius", 1.0);
      const double amp = spec.get("amplitude", 0.05);
      const int mode = spec.get_int("mode", 3);
      detail::require(r > 0, "radius", "must be positive");
      detail::require(std::abs(amp) < 1.0, "amplitude", "relative amplitude must be < 1");
      detail::require(mode >= 1, "mode", "must be >= 1");
      out.points.resize(2, samples);
      for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * pi * i / samples;
        const double rr = r * (1.0 + amp * std::cos(mode * th));
        out.points.col(i) << Scalar(rr * std::cos(th)), Scalar(rr * std::sin(th));
      }
      break;
    }
  }

  if (spec.get_int("dim", out.points.rows() == 3 ? 3 : 2) == 3 && out.points.rows() == 2) {
    Points<Scalar> lifted(3, out.points.cols());
    lifted.topRows(2) = out.points;
    lifted.row(2).setZero();
    out.points = lifted;
  }

  out.validate();
  return out;
}

}  // namespace tpc
