#pragma once

#include <algorithm>
#include <vector>

#include "tpcurve/primitives.hpp"
#include "tpcurve/types.hpp"

namespace tpc {

namespace detail {

template <typename Scalar>
struct NearestHit {
  Scalar dist;
  Eigen::Index edge;
};

template <typename Scalar>
NearestHit<Scalar> nearest_edge(const Vec<Scalar>& p, const PolylineT<Scalar>& poly) {
  const Eigen::Index n = poly.size();
  const Eigen::Index nedges = poly.closed ? n : n - 1;
  NearestHit<Scalar> best{infinity<Scalar>(), 0};
  for (Eigen::Index e = 0; e < nedges; ++e) {
    const Scalar d =
        point_segment_distance(p, poly.points.col(e), poly.points.col((e + 1) % n));
    if (d < best.dist) best = {d, e};
  }
  return best;
}

// sup over the segment [a0,a1] of dist(., to), by branch and bound.
// Two upper bounds are combined per subinterval:
//  - Lipschitz: max endpoint value + half the subinterval length;
//  - convexity: dist to a fixed edge is convex along the segment, so if an
//    edge is nearest at both ends, its endpoint values bound the interval.
// The convex bound is what keeps plateaus (everywhere-equidistant curves)
// from being subdivided to the precision floor.
template <typename Scalar>
void directed_segment_sup(const Vec<Scalar>& a0, const Vec<Scalar>& a1,
                          const PolylineT<Scalar>& to, Scalar eps, Scalar& best) {
  struct Item {
    Scalar t0, t1;
    NearestHit<Scalar> h0, h1;
  };
  const Scalar seg_len = (a1 - a0).norm();
  const Eigen::Index n = to.size();
  auto at = [&](Scalar t) { return (a0 + t * (a1 - a0)).eval(); };
  auto edge_dist = [&](Scalar t, Eigen::Index e) {
    return point_segment_distance(at(t), to.points.col(e), to.points.col((e + 1) % n));
  };

  std::vector<Item> stack;
  NearestHit<Scalar> h0 = nearest_edge(at(Scalar(0)), to);
  NearestHit<Scalar> h1 = nearest_edge(at(Scalar(1)), to);
  best = std::max({best, h0.dist, h1.dist});
  stack.push_back({Scalar(0), Scalar(1), h0, h1});

  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const Scalar half = seg_len * (it.t1 - it.t0) / Scalar(2);
    Scalar bound = std::max(it.h0.dist, it.h1.dist) + half;
    if (it.h0.edge == it.h1.edge) {
      bound = std::min(bound, std::max(it.h0.dist, it.h1.dist));
    } else {
      // single-edge bounds: f <= g_e pointwise and g_e is convex in t
      const Scalar via0 = std::max(it.h0.dist, edge_dist(it.t1, it.h0.edge));
      const Scalar via1 = std::max(edge_dist(it.t0, it.h1.edge), it.h1.dist);
      bound = std::min(bound, std::min(via0, via1));
    }
    if (bound <= best + eps) continue;
    const Scalar tm = (it.t0 + it.t1) / Scalar(2);
    const NearestHit<Scalar> hm = nearest_edge(at(tm), to);
    best = std::max(best, hm.dist);
    stack.push_back({it.t0, tm, it.h0, hm});
    stack.push_back({tm, it.t1, hm, it.h1});
  }
}

template <typename Scalar>
Scalar directed_hausdorff(const PolylineT<Scalar>& from, const PolylineT<Scalar>& to,
                          Scalar eps) {
  const Eigen::Index n = from.size();
  const Eigen::Index nedges = from.closed ? n : n - 1;
  Scalar best = Scalar(0);
  for (Eigen::Index e = 0; e < nedges; ++e) {
    const Vec<Scalar> a0 = from.points.col(e);
    const Vec<Scalar> a1 = from.points.col((e + 1) % n);
    directed_segment_sup(a0, a1, to, eps, best);
  }
  return best;
}

}  // namespace detail

// Symmetric Hausdorff distance between two polygonal images, maximized over
// segment interiors (not vertex-only). Certified to 1e-12 of the curve scale.
template <typename Scalar>
Scalar hausdorff_distance(const PolylineT<Scalar>& a, const PolylineT<Scalar>& b) {
  a.validate();
  b.validate();
  const Scalar scale = std::max(a.diameter(), b.diameter());
  const Scalar eps = Scalar(1e-12) * std::max(scale, Scalar(1e-30));
  return std::max(detail::directed_hausdorff(a, b, eps),
                  detail::directed_hausdorff(b, a, eps));
}

}  // namespace tpc
