#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tpc {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Point sets are stored one point per column (dim x n), so a point is a
// column expression and whole-cloud operations stay vectorized.
template <typename Scalar>
using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Raw curve input: an ordered polygonal chain in R^2 or R^3.
template <typename Scalar>
struct PolylineT {
  Points<Scalar> points;  // dim x n
  bool closed = true;

  Eigen::Index dim() const { return points.rows(); }
  Eigen::Index size() const { return points.cols(); }

  void validate() const {
    if (dim() != 2 && dim() != 3)
      throw std::invalid_argument("polyline: dim must be 2 or 3, got " + std::to_string(dim()));
    const Eigen::Index min_pts = closed ? 3 : 2;
    if (size() < min_pts)
      throw std::invalid_argument("polyline: needs at least " + std::to_string(min_pts) +
                                  " points, got " + std::to_string(size()));
    const Eigen::Index n = size();
    const Eigen::Index last = closed ? n : n - 1;
    for (Eigen::Index i = 0; i < last; ++i) {
      const Eigen::Index j = (i + 1) % n;
      if ((points.col(i) - points.col(j)).norm() <= Scalar(0))
        throw std::invalid_argument("polyline: zero-length edge at index " + std::to_string(i));
    }
  }

  Scalar polygonal_length() const {
    const Eigen::Index n = size();
    Scalar total = 0;
    const Eigen::Index last = closed ? n : n - 1;
    for (Eigen::Index i = 0; i < last; ++i)
      total += (points.col((i + 1) % n) - points.col(i)).norm();
    return total;
  }

  Scalar diameter() const {
    Scalar d = 0;
    for (Eigen::Index i = 0; i < size(); ++i)
      for (Eigen::Index j = i + 1; j < size(); ++j)
        d = std::max(d, (points.col(i) - points.col(j)).norm());
    return d;
  }
};

// Canonical evaluation form of a curve: nodes at uniform arclength spacing
// h = L/m (closed) or L/(m-1) (open), with unit node tangents.
template <typename Scalar>
struct ArcCurveT {
  Points<Scalar> nodes;     // dim x m
  Points<Scalar> tangents;  // dim x m, unit columns
  Scalar length = 0;
  bool closed = true;

  Eigen::Index dim() const { return nodes.rows(); }
  Eigen::Index size() const { return nodes.cols(); }

  Scalar spacing() const {
    return closed ? length / Scalar(size()) : length / Scalar(size() - 1);
  }

  // Arclength parameter of node i.
  Scalar param(Eigen::Index i) const { return Scalar(i) * spacing(); }

  // Intrinsic (arclength) separation of two node parameters.
  Scalar separation(Eigen::Index i, Eigen::Index j) const {
    return Scalar(index_distance(i, j)) * spacing();
  }

  // Grid-cell separation (exact; wraps on closed curves).
  Eigen::Index index_distance(Eigen::Index i, Eigen::Index j) const {
    Eigen::Index k = std::abs(i - j);
    if (closed) k = std::min(k, size() - k);
    return k;
  }

  PolylineT<Scalar> as_polyline() const { return PolylineT<Scalar>{nodes, closed}; }

  Scalar diameter() const { return as_polyline().diameter(); }

  void validate() const {
    if (size() < 2) throw std::invalid_argument("arc curve: too few nodes");
    if (length <= Scalar(0)) throw std::invalid_argument("arc curve: nonpositive length");
    if (tangents.cols() != nodes.cols() || tangents.rows() != nodes.rows())
      throw std::invalid_argument("arc curve: tangent/node shape mismatch");
    for (Eigen::Index i = 0; i < size(); ++i)
      if (std::abs(tangents.col(i).norm() - Scalar(1)) > Scalar(1e-9))
        throw std::invalid_argument("arc curve: non-unit tangent at node " + std::to_string(i));
  }

  // Piecewise-linear evaluation at arclength parameter s (wraps when closed).
  Vec<Scalar> eval(Scalar s) const {
    const Scalar h = spacing();
    const Eigen::Index m = size();
    if (closed) {
      s = s - length * std::floor(s / length);
      const Scalar u = s / h;
      Eigen::Index i = static_cast<Eigen::Index>(std::floor(u));
      if (i >= m) i = m - 1;
      const Scalar t = u - Scalar(i);
      return nodes.col(i) * (Scalar(1) - t) + nodes.col((i + 1) % m) * t;
    }
    s = std::clamp(s, Scalar(0), length);
    const Scalar u = s / h;
    Eigen::Index i = static_cast<Eigen::Index>(std::floor(u));
    if (i >= m - 1) i = m - 2;
    const Scalar t = u - Scalar(i);
    return nodes.col(i) * (Scalar(1) - t) + nodes.col(i + 1) * t;
  }
};

using Polyline = PolylineT<double>;
using ArcCurve = ArcCurveT<double>;

}  // namespace tpc
