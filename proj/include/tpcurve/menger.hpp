#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tpcurve/parallel.hpp"
#include "tpcurve/primitives.hpp"
#include "tpcurve/types.hpp"

namespace tpc {

// Integral Menger curvature M_p: triple sum of 1/R^p over node triples with
// pairwise intrinsic separation above the exclusion band. The restricted sum
// is renormalized by the included-triple fraction, which makes the quadrature
// unbiased on constant integrands (circles) at moderate m.
template <typename Scalar>
Scalar menger_energy(const ArcCurveT<Scalar>& c, Scalar p, Eigen::Index exclusion_width = 2,
                     Eigen::Index cost_cap = 512) {
  c.validate();
  if (!(p > Scalar(0))) throw std::invalid_argument("menger_energy: p must be positive");
  if (c.size() < 24) throw std::invalid_argument("menger_energy: need at least 24 nodes");
  if (c.size() > cost_cap)
    throw std::invalid_argument("menger_energy: node count " + std::to_string(c.size()) +
                                " above cost cap " + std::to_string(cost_cap) +
                                "; use a coarser resolution");

  const Eigen::Index m = c.size();
  const Scalar h = c.spacing();
  const Scalar cap = std::pow(Scalar(1) / h, p);

  struct Partial {
    double sum = 0;
    long long count = 0;
  };
  auto result = block_map_reduce(
      Eigen::Index(0), m, Partial{},
      [&](Eigen::Index lo, Eigen::Index hi) {
        Partial part;
        for (Eigen::Index i = lo; i < hi; ++i) {
          for (Eigen::Index j = i + 1; j < m; ++j) {
            if (c.index_distance(i, j) <= exclusion_width) continue;
            for (Eigen::Index k = j + 1; k < m; ++k) {
              if (c.index_distance(j, k) <= exclusion_width ||
                  c.index_distance(i, k) <= exclusion_width)
                continue;
              const auto a = (c.nodes.col(j) - c.nodes.col(i)).eval();
              const auto b = (c.nodes.col(k) - c.nodes.col(i)).eval();
              const Scalar la2 = a.squaredNorm(), lb2 = b.squaredNorm();
              const Scalar lc2 = (c.nodes.col(k) - c.nodes.col(j)).squaredNorm();
              Scalar val;
              if (la2 <= Scalar(0) || lb2 <= Scalar(0) || lc2 <= Scalar(0)) {
                val = cap;  // coincident positions at grid scale
              } else {
                const Scalar cross2 = la2 * lb2 - a.dot(b) * a.dot(b);
                const Scalar twice_area = std::sqrt(std::max(Scalar(0), cross2));
                // the cross-product cancellation noise floor is sqrt(eps)
                if (twice_area <= Scalar(1e-7) * std::sqrt(la2 * lb2)) {
                  val = Scalar(0);  // collinear: R infinite
                } else {
                  const Scalar inv_R =
                      Scalar(2) * twice_area / std::sqrt(la2 * lb2 * lc2);
                  val = std::min(std::pow(inv_R, p), cap);
                }
              }
              part.sum += static_cast<double>(val);
              part.count += 1;
            }
          }
        }
        return part;
      },
      [](Partial& acc, const Partial& x) {
        acc.sum += x.sum;
        acc.count += x.count;
      });

  if (result.count == 0) return Scalar(0);
  const double mean = result.sum / static_cast<double>(result.count);
  const double L = static_cast<double>(c.length);
  return Scalar(L * L * L * mean);
}

namespace detail {

// C^1 evaluation at an arclength parameter: cubic Hermite on the node
// segment, derivative vectors from the stored unit tangents. Tracks smooth
// curves to O(h^4), which keeps sub-node circumradius evaluations from
// inheriting the O(h^2) chord sagitta of linear interpolation.
template <typename Scalar>
Vec<Scalar> eval_hermite(const ArcCurveT<Scalar>& c, Scalar s) {
  const Scalar h = c.spacing();
  const Eigen::Index m = c.size();
  Eigen::Index i;
  Scalar t;
  if (c.closed) {
    s = s - c.length * std::floor(s / c.length);
    const Scalar u = s / h;
    i = static_cast<Eigen::Index>(std::floor(u));
    if (i >= m) i = m - 1;
    t = u - Scalar(i);
  } else {
    s = std::clamp(s, Scalar(0), c.length);
    const Scalar u = s / h;
    i = static_cast<Eigen::Index>(std::floor(u));
    if (i >= m - 1) i = m - 2;
    t = u - Scalar(i);
  }
  const Eigen::Index j = c.closed ? (i + 1) % m : i + 1;
  const auto p0 = c.nodes.col(i), p1 = c.nodes.col(j);
  const Scalar ell = (p1 - p0).norm();
  const auto m0 = (c.tangents.col(i) * ell).eval();
  const auto m1 = (c.tangents.col(j) * ell).eval();
  const Scalar t2 = t * t, t3 = t2 * t;
  return (Scalar(2) * t3 - Scalar(3) * t2 + Scalar(1)) * p0 + (t3 - Scalar(2) * t2 + t) * m0 +
         (Scalar(-2) * t3 + Scalar(3) * t2) * p1 + (t3 - t2) * m1;
}

template <typename Scalar>
Scalar circumradius_at_params(const ArcCurveT<Scalar>& c, Scalar t1, Scalar t2, Scalar t3,
                              Scalar min_sep) {
  auto sep = [&](Scalar a, Scalar b) {
    Scalar d = std::abs(a - b);
    if (c.closed) d = std::min(d, c.length - d);
    return d;
  };
  if (sep(t1, t2) < min_sep || sep(t2, t3) < min_sep || sep(t1, t3) < min_sep)
    return infinity<Scalar>();
  const Vec<Scalar> x = eval_hermite(c, t1), y = eval_hermite(c, t2), z = eval_hermite(c, t3);
  if ((x - y).norm() == Scalar(0) || (y - z).norm() == Scalar(0) || (x - z).norm() == Scalar(0))
    return Scalar(0);
  return circumradius(x, y, z);
}

}  // namespace detail

struct ThicknessResult {
  double value = 0;
  Eigen::Index i = 0, j = 0, k = 0;  // scan argmin triple
};

// Thickness as the smallest circumradius over curve point triples: discrete
// scan over node triples (pairwise separation above the exclusion band),
// then golden-section polishing of the three arc parameters on the
// piecewise-linear curve. The polish may shrink separations below the scan
// band, which lets the triple approach an osculating configuration.
template <typename Scalar>
ThicknessResult thickness(const ArcCurveT<Scalar>& c, Eigen::Index exclusion_width = 2) {
  c.validate();
  if (!c.closed) throw std::invalid_argument("thickness: curve must be closed");
  if (c.size() < 16) throw std::invalid_argument("thickness: need at least 16 nodes");

  const Eigen::Index m = c.size();
  const Scalar h = c.spacing();

  struct Partial {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index i = 0, j = 0, k = 0;
  };
  auto result = block_map_reduce(
      Eigen::Index(0), m, Partial{},
      [&](Eigen::Index lo, Eigen::Index hi) {
        Partial part;
        for (Eigen::Index i = lo; i < hi; ++i) {
          for (Eigen::Index j = i + 1; j < m; ++j) {
            if (c.index_distance(i, j) <= exclusion_width) continue;
            for (Eigen::Index k = j + 1; k < m; ++k) {
              if (c.index_distance(j, k) <= exclusion_width ||
                  c.index_distance(i, k) <= exclusion_width)
                continue;
              const auto a = (c.nodes.col(j) - c.nodes.col(i)).eval();
              const auto b = (c.nodes.col(k) - c.nodes.col(i)).eval();
              const Scalar la2 = a.squaredNorm(), lb2 = b.squaredNorm();
              const Scalar lc2 = (c.nodes.col(k) - c.nodes.col(j)).squaredNorm();
              const Scalar cross2 = la2 * lb2 - a.dot(b) * a.dot(b);
              const Scalar twice_area = std::sqrt(std::max(Scalar(0), cross2));
              if (twice_area <= Scalar(0)) continue;  // collinear: R infinite
              const double R =
                  static_cast<double>(std::sqrt(la2 * lb2 * lc2) / (Scalar(2) * twice_area));
              if (R < part.best) part = {R, i, j, k};
            }
          }
        }
        return part;
      },
      [](Partial& acc, const Partial& x) {
        if (x.best < acc.best) acc = x;
      });

  // Local polish: golden-section on each arc parameter in turn, 3 sweeps.
  const Scalar tol = Scalar(1e-6) * c.length;
  const Scalar min_sep = h / Scalar(4);
  Scalar t[3] = {c.param(result.i), c.param(result.j), c.param(result.k)};
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int which = 0; which < 3; ++which) {
      const Scalar center = t[which];
      const Scalar lo = center - Scalar(1.5) * h, hi = center + Scalar(1.5) * h;
      t[which] = golden_section_min(
          [&](Scalar s) {
            Scalar tt[3] = {t[0], t[1], t[2]};
            tt[which] = s;
            return detail::circumradius_at_params(c, tt[0], tt[1], tt[2], min_sep);
          },
          lo, hi, tol);
    }
  }
  const Scalar polished = detail::circumradius_at_params(c, t[0], t[1], t[2], min_sep);
  ThicknessResult out;
  out.value = std::min(result.best, static_cast<double>(polished));
  out.i = result.i;
  out.j = result.j;
  out.k = result.k;
  return out;
}

}  // namespace tpc
