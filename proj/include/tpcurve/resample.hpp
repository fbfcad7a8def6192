#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tpcurve/types.hpp"

namespace tpc {

// Unit tangent at node i from the node positions: central difference in the
// interior (bisector direction at polygon corners), one-sided at open ends.
template <typename Scalar>
Vec<Scalar> tangent_estimate(const ArcCurveT<Scalar>& c, Eigen::Index i) {
  const Eigen::Index m = c.size();
  if (i < 0 || i >= m) throw std::invalid_argument("tangent_estimate: node index out of range");
  Vec<Scalar> diff;
  if (c.closed) {
    diff = c.nodes.col((i + 1) % m) - c.nodes.col((i - 1 + m) % m);
  } else if (i == 0) {
    diff = c.nodes.col(1) - c.nodes.col(0);
  } else if (i == m - 1) {
    diff = c.nodes.col(m - 1) - c.nodes.col(m - 2);
  } else {
    diff = c.nodes.col(i + 1) - c.nodes.col(i - 1);
  }
  const Scalar n = diff.norm();
  if (n <= Scalar(1e-12) * c.spacing())
    throw std::runtime_error("tangent_estimate: non-resolvable tangent at node " +
                             std::to_string(i) + " (curve doubles back at grid scale)");
  return diff / n;
}

// Resamples a polyline at m uniform-arclength nodes and fills node tangents.
template <typename Scalar>
ArcCurveT<Scalar> resample_arclength(const PolylineT<Scalar>& p, Eigen::Index m) {
  p.validate();
  if (m < 8) throw std::invalid_argument("resample_arclength: node count must be >= 8");

  const Eigen::Index n = p.size();
  const Eigen::Index nedges = p.closed ? n : n - 1;
  std::vector<Scalar> cum(static_cast<std::size_t>(nedges) + 1, Scalar(0));
  for (Eigen::Index e = 0; e < nedges; ++e) {
    const auto a = p.points.col(e);
    const auto b = p.points.col((e + 1) % n);
    cum[static_cast<std::size_t>(e) + 1] = cum[static_cast<std::size_t>(e)] + (b - a).norm();
  }
  const Scalar L = cum.back();
  if (!(L > Scalar(0))) throw std::invalid_argument("resample_arclength: degenerate polyline");

  ArcCurveT<Scalar> out;
  out.closed = p.closed;
  out.length = L;
  out.nodes.resize(p.dim(), m);

  const Scalar h = p.closed ? L / Scalar(m) : L / Scalar(m - 1);
  Eigen::Index e = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    Scalar s = Scalar(k) * h;
    if (s > L) s = L;
    while (e + 1 < nedges && cum[static_cast<std::size_t>(e) + 1] < s) ++e;
    // locate s in edge e
    while (e > 0 && cum[static_cast<std::size_t>(e)] > s) --e;
    const Scalar seg = cum[static_cast<std::size_t>(e) + 1] - cum[static_cast<std::size_t>(e)];
    const Scalar t = seg > Scalar(0) ? (s - cum[static_cast<std::size_t>(e)]) / seg : Scalar(0);
    const auto a = p.points.col(e);
    const auto b = p.points.col((e + 1) % n);
    out.nodes.col(k) = a + t * (b - a);
  }

  out.tangents.resize(p.dim(), m);
  for (Eigen::Index i = 0; i < m; ++i) out.tangents.col(i) = tangent_estimate(out, i);
  return out;
}

}  // namespace tpc
