#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tpcurve/types.hpp"

namespace tpc {

template <typename Scalar>
constexpr Scalar infinity() {
  return std::numeric_limits<Scalar>::infinity();
}

// Radius of the unique circle tangent to `tangent` at `base` and passing
// through `target`:  r = |y-x|^2 / (2 dist(y, line(x, tangent)))
//                      = |y-x| / (2 sin angle(tangent, y-x)).
// Zero when the points coincide, infinite when y-x is parallel to the tangent.
template <typename DBase, typename DTan, typename DTarget>
typename DBase::Scalar tangent_point_radius(const Eigen::MatrixBase<DBase>& base,
                                            const Eigen::MatrixBase<DTan>& tangent,
                                            const Eigen::MatrixBase<DTarget>& target) {
  using Scalar = typename DBase::Scalar;
  if (std::abs(tangent.norm() - Scalar(1)) > Scalar(1e-9))
    throw std::invalid_argument("tangent_point_radius: tangent must be a unit vector");
  const auto u = (target - base).eval();
  const Scalar d = u.norm();
  if (d == Scalar(0)) return Scalar(0);
  // perpendicular part of u relative to the tangent line
  const auto perp = (u - u.dot(tangent) * tangent).eval();
  const Scalar p = perp.norm();
  if (p <= Scalar(1e-12) * d) return infinity<Scalar>();
  return d * d / (Scalar(2) * p);
}

// Circumradius of three pairwise-distinct points; infinite for collinear
// triples. R = |x-y||y-z||z-x| / (4 area).
template <typename DX, typename DY, typename DZ>
typename DX::Scalar circumradius(const Eigen::MatrixBase<DX>& x,
                                 const Eigen::MatrixBase<DY>& y,
                                 const Eigen::MatrixBase<DZ>& z) {
  using Scalar = typename DX::Scalar;
  const auto a = (y - x).eval();
  const auto b = (z - x).eval();
  const Scalar la = a.norm(), lb = b.norm(), lc = (z - y).norm();
  if (la == Scalar(0) || lb == Scalar(0) || lc == Scalar(0))
    throw std::invalid_argument("circumradius: coincident points");
  // 2*area = |a x b|; valid in 2D and 3D via the Gram determinant
  const Scalar cross2 = a.squaredNorm() * b.squaredNorm() - a.dot(b) * a.dot(b);
  const Scalar twice_area = std::sqrt(std::max(Scalar(0), cross2));
  const Scalar scale = std::max({la, lb, lc});
  if (twice_area <= Scalar(1e-14) * scale * scale) return infinity<Scalar>();
  return la * lb * lc / (Scalar(2) * twice_area);
}

// Distance from a point to the closed segment [a, b].
template <typename DP, typename DA, typename DB>
typename DP::Scalar point_segment_distance(const Eigen::MatrixBase<DP>& p,
                                           const Eigen::MatrixBase<DA>& a,
                                           const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DP::Scalar;
  const auto ab = (b - a).eval();
  const Scalar len2 = ab.squaredNorm();
  if (len2 == Scalar(0)) return (p - a).norm();
  Scalar t = (p - a).dot(ab) / len2;
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

// Minimal distance between two closed segments.
template <typename Scalar>
Scalar segment_segment_distance(const Vec<Scalar>& p0, const Vec<Scalar>& p1,
                                const Vec<Scalar>& q0, const Vec<Scalar>& q1) {
  const Vec<Scalar> d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const Scalar a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  Scalar s = 0, t = 0;
  if (a == Scalar(0) && e == Scalar(0)) return r.norm();
  if (a == Scalar(0)) {
    t = std::clamp(f / e, Scalar(0), Scalar(1));
  } else {
    const Scalar c = d1.dot(r);
    if (e == Scalar(0)) {
      s = std::clamp(-c / a, Scalar(0), Scalar(1));
    } else {
      const Scalar b = d1.dot(d2);
      const Scalar denom = a * e - b * b;
      if (denom > Scalar(0)) s = std::clamp((b * f - c * e) / denom, Scalar(0), Scalar(1));
      t = (b * s + f) / e;
      if (t < Scalar(0)) {
        t = 0;
        s = std::clamp(-c / a, Scalar(0), Scalar(1));
      } else if (t > Scalar(1)) {
        t = 1;
        s = std::clamp((b - c) / a, Scalar(0), Scalar(1));
      }
    }
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

namespace detail {

// least squares slope/intercept of y against x
inline std::pair<double, double> linear_fit(const std::vector<double>& x,
                                            const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) return {0.0, sy / std::max(1.0, n)};
  const double slope = (n * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / n};
}

}  // namespace detail

// Golden-section minimization of a unimodal function on [a, b].
template <typename Scalar, typename F>
Scalar golden_section_min(F f, Scalar a, Scalar b, Scalar tol) {
  const Scalar inv_phi = Scalar(0.6180339887498949);
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / Scalar(2);
}

}  // namespace tpc
