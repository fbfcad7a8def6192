#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpcurve/energy.hpp"
#include "tpcurve/hausdorff.hpp"
#include "tpcurve/primitives.hpp"
#include "tpcurve/resample.hpp"
#include "tpcurve/types.hpp"

namespace tpc {

template <typename Scalar>
struct ScreenResult {
  bool pass = true;
  Eigen::Index witness_i = 0, witness_j = 0;
  Scalar distance = 0;
};

// Computable surrogate for injectivity: fails iff some node pair that is far
// apart along the curve (intrinsic distance >= min_separation) is spatially
// closer than half a grid cell.
template <typename Scalar>
ScreenResult<Scalar> injectivity_screen(const ArcCurveT<Scalar>& c, Scalar min_separation) {
  const Scalar h = c.spacing();
  if (!(min_separation >= Scalar(2) * h))
    throw std::invalid_argument("injectivity_screen: min_separation must be >= 2h");
  ScreenResult<Scalar> res;
  Scalar worst = infinity<Scalar>();
  const Eigen::Index m = c.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (c.separation(i, j) < min_separation) continue;
      const Scalar d = (c.nodes.col(i) - c.nodes.col(j)).norm();
      if (d < h / Scalar(2) && d < worst) {
        worst = d;
        res = {false, i, j, d};
      }
    }
  }
  return res;
}

template <typename Scalar>
struct InscribedPolygonT {
  std::vector<Scalar> vertex_params;  // increasing on S_L
  Points<Scalar> vertices;            // dim x N, on the source curve's nodes
  Scalar spacing_bound = 0;
  Eigen::Index N = 0;
  bool closed = true;

  PolylineT<Scalar> as_polyline() const { return PolylineT<Scalar>{vertices, closed}; }
};

using InscribedPolygon = InscribedPolygonT<double>;

// Greedy inscription: walk the curve and emit a vertex just before the chord
// to the previous vertex would reach the spacing bound. The closing chord is
// repaired by merging the final vertex, or by splitting the final leg when a
// merge would lengthen it.
template <typename Scalar>
InscribedPolygonT<Scalar> inscribe_polygon(const ArcCurveT<Scalar>& c, Scalar spacing_bound) {
  const Scalar h = c.spacing();
  if (!(spacing_bound > Scalar(2) * h))
    throw std::invalid_argument("inscribe_polygon: spacing_bound must exceed 2h");
  {
    const auto screen = injectivity_screen(c, Scalar(2) * h);
    if (!screen.pass)
      throw std::runtime_error("inscribe_polygon: injectivity screen failed (nodes " +
                               std::to_string(screen.witness_i) + ", " +
                               std::to_string(screen.witness_j) + ")");
  }

  const Eigen::Index m = c.size();
  std::vector<Eigen::Index> verts{0};
  for (Eigen::Index k = 1; k < m; ++k) {
    if ((c.nodes.col(k) - c.nodes.col(verts.back())).norm() >= spacing_bound) {
      if (k - 1 > verts.back()) verts.push_back(k - 1);
      else verts.push_back(k);  // bound barely above node gap
    }
  }

  if (!c.closed) {
    if (verts.back() != m - 1) verts.push_back(m - 1);  // endpoints always included
  } else {
    auto chord = [&](Eigen::Index a, Eigen::Index b) {
      return (c.nodes.col(a) - c.nodes.col(b)).norm();
    };
    if (verts.size() >= 3 && chord(verts.back(), verts.front()) >= spacing_bound) {
      // try merging the final vertex into the start
      const Eigen::Index dropped = verts.back();
      if (chord(verts[verts.size() - 2], verts.front()) < spacing_bound) {
        verts.pop_back();
      } else {
        // split the closing leg at the node balancing the two chords
        Eigen::Index best = dropped;
        Scalar best_val = infinity<Scalar>();
        for (Eigen::Index k = dropped + 1; k < m; ++k) {
          const Scalar v = std::max(chord(k, dropped), chord(k, verts.front()));
          if (v < best_val) {
            best_val = v;
            best = k;
          }
        }
        if (best_val >= spacing_bound)
          throw std::runtime_error("inscribe_polygon: cannot close polygon under the bound");
        verts.push_back(best);
      }
    }
    while (verts.size() < 3) {  // a polygon needs at least 3 vertices
      verts.clear();
      for (int k = 0; k < 3; ++k) verts.push_back(k * m / 3);
      break;
    }
  }

  InscribedPolygonT<Scalar> out;
  out.closed = c.closed;
  out.spacing_bound = spacing_bound;
  out.N = static_cast<Eigen::Index>(verts.size());
  out.vertices.resize(c.dim(), out.N);
  for (Eigen::Index k = 0; k < out.N; ++k) {
    out.vertex_params.push_back(c.param(verts[static_cast<std::size_t>(k)]));
    out.vertices.col(k) = c.nodes.col(verts[static_cast<std::size_t>(k)]);
  }

  // the spacing inequality must hold for every (cyclic) pair
  const Eigen::Index last = c.closed ? out.N : out.N - 1;
  for (Eigen::Index k = 0; k < last; ++k) {
    const Scalar edge = (out.vertices.col(k) - out.vertices.col((k + 1) % out.N)).norm();
    if (!(edge < spacing_bound))
      throw std::runtime_error("inscribe_polygon: spacing bound violated after construction");
  }
  return out;
}

namespace detail {

// Clips the parameter interval [t0, t1] of the segment a + t (b - a) against
// the halfplane {x : n . (x - p) >= 0}; returns false when empty.
template <typename Scalar>
bool clip_halfplane(const Vec<Scalar>& a, const Vec<Scalar>& b, const Vec<Scalar>& p,
                    const Vec<Scalar>& n, Scalar& t0, Scalar& t1) {
  const Scalar f0 = n.dot(a - p);
  const Scalar f1 = n.dot(b - p);
  const Scalar df = f1 - f0;
  if (std::abs(static_cast<double>(df)) < 1e-300) {
    return f0 >= Scalar(0);  // parallel: all or nothing
  }
  const Scalar tc = -f0 / df;
  if (df > Scalar(0)) t0 = std::max(t0, tc);
  else t1 = std::min(t1, tc);
  return t0 <= t1;
}

// Intersection parameter range of a segment with a closed triangle, in the
// triangle's plane (2D, or 3D coplanar case). Returns false when empty.
template <typename Scalar>
bool segment_triangle_overlap_2d(const Vec<Scalar>& a, const Vec<Scalar>& b,
                                 const Vec<Scalar>& ta, const Vec<Scalar>& tb,
                                 const Vec<Scalar>& tc_, Scalar& t0, Scalar& t1) {
  t0 = Scalar(0);
  t1 = Scalar(1);
  // inward normals of the triangle edges (works in-plane for 3D coplanar input)
  auto inward = [&](const Vec<Scalar>& e0, const Vec<Scalar>& e1, const Vec<Scalar>& opp) {
    const Vec<Scalar> edge = e1 - e0;
    Vec<Scalar> n = (opp - e0) - edge * ((opp - e0).dot(edge) / edge.squaredNorm());
    return n;
  };
  if (!clip_halfplane(a, b, ta, inward(ta, tb, tc_), t0, t1)) return false;
  if (!clip_halfplane(a, b, tb, inward(tb, tc_, ta), t0, t1)) return false;
  if (!clip_halfplane(a, b, tc_, inward(tc_, ta, tb), t0, t1)) return false;
  return t0 <= t1;
}

// Does the segment [a, b] touch the closed triangle (ta, tb, tc)?  eps is an
// absolute slack in length units; contact within eps of the parameter start
// can be excluded via skip_start (shared-vertex tolerance for edges adjacent
// to the replaced edge).
template <typename Scalar>
bool segment_touches_triangle(const Vec<Scalar>& a, const Vec<Scalar>& b, const Vec<Scalar>& ta,
                              const Vec<Scalar>& tb, const Vec<Scalar>& tc_, Scalar eps,
                              bool skip_start) {
  const Scalar seg_len = (b - a).norm();
  const Scalar t_skip = skip_start && seg_len > Scalar(0) ? eps / seg_len : Scalar(0);

  if (a.size() == 2) {
    Scalar t0, t1;
    if (!segment_triangle_overlap_2d(a, b, ta, tb, tc_, t0, t1)) return false;
    return t1 > t_skip + Scalar(1e-12);
  }

  // 3D: classify endpoints against the triangle plane
  const Vec<Scalar> e1 = tb - ta, e2 = tc_ - ta;
  Eigen::Matrix<Scalar, 3, 1> n3;
  n3 << e1(1) * e2(2) - e1(2) * e2(1), e1(2) * e2(0) - e1(0) * e2(2),
      e1(0) * e2(1) - e1(1) * e2(0);
  Vec<Scalar> n = n3;
  const Scalar nn = n.norm();
  if (nn == Scalar(0)) throw std::invalid_argument("segment_touches_triangle: degenerate triangle");
  n /= nn;
  const Scalar d0 = n.dot(a - ta);
  const Scalar d1 = n.dot(b - ta);

  if (std::abs(d0) <= eps && std::abs(d1) <= eps) {
    // coplanar: project out the normal component and clip in-plane
    auto proj = [&](const Vec<Scalar>& p) { return (p - n.dot(p - ta) * n).eval(); };
    Scalar t0, t1;
    if (!segment_triangle_overlap_2d(proj(a), proj(b), ta, tb, tc_, t0, t1)) return false;
    return t1 > t_skip + Scalar(1e-12);
  }
  if (d0 > eps && d1 > eps) return false;
  if (d0 < -eps && d1 < -eps) return false;

  // proper crossing: test the piercing point
  const Scalar t = d0 / (d0 - d1);
  if (t < t_skip) return false;
  const Vec<Scalar> x = a + t * (b - a);
  // barycentric membership with slack
  const Scalar d11 = e1.dot(e1), d12 = e1.dot(e2), d22 = e2.dot(e2);
  const Vec<Scalar> w = x - ta;
  const Scalar w1 = w.dot(e1), w2 = w.dot(e2);
  const Scalar det = d11 * d22 - d12 * d12;
  if (det <= Scalar(0)) return false;
  const Scalar u = (d22 * w1 - d12 * w2) / det;
  const Scalar v = (d11 * w2 - d12 * w1) / det;
  const Scalar slack = eps / std::sqrt(std::max(det, Scalar(1e-300)));
  return u >= -slack && v >= -slack && u + v <= Scalar(1) + slack;
}

template <typename Scalar>
void require_simple(const PolylineT<Scalar>& p, Scalar eps) {
  const Eigen::Index n = p.size();
  const Eigen::Index nedges = p.closed ? n : n - 1;
  for (Eigen::Index i = 0; i < nedges; ++i) {
    for (Eigen::Index j = i + 1; j < nedges; ++j) {
      const bool adjacent = (j == i + 1) || (p.closed && i == 0 && j == nedges - 1);
      if (adjacent) continue;  // share a vertex only through the chain
      const Vec<Scalar> a0 = p.points.col(i), a1 = p.points.col((i + 1) % n);
      const Vec<Scalar> b0 = p.points.col(j), b1 = p.points.col((j + 1) % n);
      if (segment_segment_distance(a0, a1, b0, b1) <= eps)
        throw std::invalid_argument("polygon is not simple: edges " + std::to_string(i) +
                                    " and " + std::to_string(j) + " intersect");
    }
  }
}

}  // namespace detail

// Legality of a Delta-move: replacing edge u = (p_i, p_{i+1}) by the other
// two sides of the triangle (p_i, p_{i+1}, w) is valid iff the closed
// triangle meets the polygon exactly in u. Edges adjacent to u may touch the
// triangle only at their shared endpoint.
template <typename Scalar>
bool delta_move_valid(const PolylineT<Scalar>& p, Eigen::Index edge_index, const Vec<Scalar>& w) {
  p.validate();
  if (!p.closed) throw std::invalid_argument("delta_move_valid: polygon must be closed");
  const Eigen::Index n = p.size();
  if (edge_index < 0 || edge_index >= n)
    throw std::invalid_argument("delta_move_valid: edge index out of range");
  const Scalar eps = Scalar(1e-12) * p.diameter();
  detail::require_simple(p, eps);

  const Vec<Scalar> u0 = p.points.col(edge_index);
  const Vec<Scalar> u1 = p.points.col((edge_index + 1) % n);
  // apex must be off the line of u
  const Vec<Scalar> ue = u1 - u0;
  const Vec<Scalar> rel = w - u0;
  const Scalar off = (rel - ue * (rel.dot(ue) / ue.squaredNorm())).norm();
  if (off <= eps)
    throw std::invalid_argument("delta_move_valid: apex is collinear with the edge");

  for (Eigen::Index e = 0; e < n; ++e) {
    if (e == edge_index) continue;
    const bool prev = ((e + 1) % n) == edge_index;
    const bool next = e == (edge_index + 1) % n;
    Vec<Scalar> a = p.points.col(e);
    Vec<Scalar> b = p.points.col((e + 1) % n);
    if (prev) std::swap(a, b);  // orient so the shared vertex sits at t = 0
    const bool shared = prev || next;
    if (detail::segment_touches_triangle(a, b, u0, u1, w, eps, shared)) return false;
  }
  return true;
}

// Isotopy threshold: delta_q * max(E1, E2)^{-1/(q-2)}.
template <typename Scalar>
Scalar isotopy_threshold(Scalar E1, Scalar E2, Scalar q, Scalar delta_q) {
  if (!(q > Scalar(2)))
    throw std::invalid_argument("isotopy_threshold: threshold undefined at and below critical exponent q=2");
  if (!(E1 > Scalar(0) && E2 > Scalar(0)))
    throw std::invalid_argument("isotopy_threshold: energies must be positive");
  if (!(delta_q > Scalar(0)))
    throw std::invalid_argument("isotopy_threshold: delta_q must be positive");
  return delta_q * std::pow(std::max(E1, E2), Scalar(-1) / (q - Scalar(2)));
}

enum class IsotopyVerdict { certified, inconclusive };

struct IsotopyCertificate {
  double q = 0;
  double delta_q = 0;
  double E1 = 0, E2 = 0;
  double threshold = 0;
  double hausdorff = 0;
  IsotopyVerdict verdict = IsotopyVerdict::inconclusive;
};

// One-directional isotopy certificate: certified iff the Hausdorff distance
// is below the energy threshold. Never claims "not isotopic".
template <typename Scalar>
IsotopyCertificate certify_isotopy(const ArcCurveT<Scalar>& a, const ArcCurveT<Scalar>& b,
                                   Scalar q, Scalar delta_q, Eigen::Index exclusion_width = 2) {
  for (const auto* c : {&a, &b}) {
    const auto screen = injectivity_screen(*c, Scalar(8) * c->spacing());
    if (!screen.pass)
      throw std::runtime_error("certify_isotopy: injectivity screen failed (nodes " +
                               std::to_string(screen.witness_i) + ", " +
                               std::to_string(screen.witness_j) + ")");
  }

  // both curves evaluated at matched resolution
  const Eigen::Index m = std::min(a.size(), b.size());
  const ArcCurveT<Scalar> ca = resample_arclength(a.as_polyline(), m);
  const ArcCurveT<Scalar> cb = resample_arclength(b.as_polyline(), m);

  for (const auto* c : {&ca, &cb}) {
    const std::vector<Eigen::Index> levels{m / 4, m / 2, m};
    const auto ref = refine_energy(c->as_polyline(), q, levels, exclusion_width);
    if (ref.trend == RefineTrend::diverging)
      throw std::runtime_error("certify_isotopy: energy not finite at this resolution");
  }

  IsotopyCertificate cert;
  cert.q = static_cast<double>(q);
  cert.delta_q = static_cast<double>(delta_q);
  cert.E1 = energy(ca, q, exclusion_width).value;
  cert.E2 = energy(cb, q, exclusion_width).value;
  cert.threshold = static_cast<double>(
      isotopy_threshold(Scalar(cert.E1), Scalar(cert.E2), q, delta_q));
  cert.hausdorff = static_cast<double>(hausdorff_distance(a.as_polyline(), b.as_polyline()));
  cert.verdict = cert.hausdorff < cert.threshold ? IsotopyVerdict::certified
                                                 : IsotopyVerdict::inconclusive;
  return cert;
}

}  // namespace tpc
