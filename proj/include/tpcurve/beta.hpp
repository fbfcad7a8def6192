#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tpcurve/energy.hpp"
#include "tpcurve/primitives.hpp"
#include "tpcurve/types.hpp"

namespace tpc {

template <typename Scalar>
struct BetaValue {
  Scalar value = 0;
  bool empty_ball = false;  // no other node inside B(x, d)
};

namespace detail {

// max over the cloud of distance to the line through the origin with
// direction dir, divided by d.
template <typename Scalar>
Scalar line_flatness(const Points<Scalar>& rel, const Vec<Scalar>& dir, Scalar d) {
  Scalar worst = 0;
  for (Eigen::Index k = 0; k < rel.cols(); ++k) {
    const auto p = rel.col(k);
    const Scalar along = p.dot(dir);
    worst = std::max(worst, (p - along * dir).norm());
  }
  return worst / d;
}

// Rotates dir by angle a in the plane spanned by (dir, axis).
template <typename Scalar>
Vec<Scalar> rotate_towards(const Vec<Scalar>& dir, const Vec<Scalar>& axis, Scalar a) {
  return (std::cos(a) * dir + std::sin(a) * axis).normalized();
}

}  // namespace detail

// Jones beta number at node i and scale d: infimum over lines through the
// node of the scale-normalized distance of in-ball nodes to the line.
// Candidate directions: every in-ball node direction, the principal axis of
// the in-ball cloud, and a coarse angular sweep; the best candidate is
// refined by golden-section search on the rotation angles.
template <typename Scalar>
BetaValue<Scalar> beta_number(const ArcCurveT<Scalar>& c, Eigen::Index i, Scalar d) {
  if (i < 0 || i >= c.size()) throw std::invalid_argument("beta_number: node index out of range");
  if (!(d > Scalar(0)) || d > c.diameter() * Scalar(1 + 1e-9))
    throw std::invalid_argument("beta_number: scale must lie in (0, diam]");

  const auto x = c.nodes.col(i);
  std::vector<Eigen::Index> inside;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (j == i) continue;
    if ((c.nodes.col(j) - x).norm() <= d) inside.push_back(j);
  }
  if (inside.empty()) return {Scalar(0), true};

  Points<Scalar> rel(c.dim(), static_cast<Eigen::Index>(inside.size()));
  for (std::size_t k = 0; k < inside.size(); ++k)
    rel.col(static_cast<Eigen::Index>(k)) = c.nodes.col(inside[k]) - x;

  std::vector<Vec<Scalar>> candidates;
  for (Eigen::Index k = 0; k < rel.cols(); ++k) {
    const Scalar n = rel.col(k).norm();
    if (n > Scalar(0)) candidates.push_back(rel.col(k) / n);
  }
  // principal axis of the in-ball cloud
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cov = rel * rel.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> es(cov);
  candidates.push_back(es.eigenvectors().col(c.dim() - 1));
  // coarse sweep in the top principal plane
  if (rel.cols() >= 1) {
    const Vec<Scalar> e1 = es.eigenvectors().col(c.dim() - 1);
    const Vec<Scalar> e2 = es.eigenvectors().col(c.dim() - 2);
    for (int a = 0; a < 64; ++a) {
      const Scalar th = Scalar(std::numbers::pi) * Scalar(a) / Scalar(64);
      candidates.push_back(std::cos(th) * e1 + std::sin(th) * e2);
    }
  }

  Vec<Scalar> best_dir = candidates.front();
  Scalar best = detail::line_flatness(rel, best_dir, d);
  for (const auto& dir : candidates) {
    const Scalar v = detail::line_flatness(rel, dir, d);
    if (v < best) {
      best = v;
      best_dir = dir;
    }
  }

  // angular refinement around the best candidate
  const Scalar window = Scalar(std::numbers::pi) / Scalar(32);
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (Eigen::Index axis_i = 0; axis_i < c.dim(); ++axis_i) {
      Vec<Scalar> axis = Vec<Scalar>::Zero(c.dim());
      axis(axis_i) = 1;
      axis -= axis.dot(best_dir) * best_dir;
      const Scalar n = axis.norm();
      if (n < Scalar(1e-9)) continue;
      axis /= n;
      const Scalar a_best = golden_section_min(
          [&](Scalar a) {
            return detail::line_flatness(rel, detail::rotate_towards(best_dir, axis, a), d);
          },
          -window, window, Scalar(1e-7));
      best_dir = detail::rotate_towards(best_dir, axis, a_best);
    }
  }
  best = std::min(best, detail::line_flatness(rel, best_dir, d));
  return {std::min(best, Scalar(1)), false};
}

// Per-scale sup of beta over all node centers, with the fitted log-log decay
// exponent and its comparison against kappa = (q-2)/(q+4).
struct BetaProfile {
  std::vector<double> radii;     // strictly decreasing
  std::vector<double> sup_beta;  // in [0, 1]
  double fitted_exponent = 0;
  double kappa = 0;
  bool pass = false;
  Eigen::Index fit_begin = 0, fit_end = 0;  // index window used for the fit
};

template <typename Scalar>
BetaProfile beta_profile(const ArcCurveT<Scalar>& c, Scalar q, std::vector<Scalar> scales) {
  if (scales.size() < 3) throw std::invalid_argument("beta_profile: need at least 3 scales");
  std::sort(scales.begin(), scales.end(), std::greater<Scalar>());
  const Scalar diam = c.diameter();
  for (Scalar d : scales)
    if (!(d > Scalar(0)) || d > diam * Scalar(1 + 1e-9))
      throw std::invalid_argument("beta_profile: scales must lie in (0, diam]");

  BetaProfile prof;
  for (Scalar d : scales) {
    Scalar sup = 0;
    for (Eigen::Index i = 0; i < c.size(); ++i)
      sup = std::max(sup, beta_number(c, i, d).value);
    prof.radii.push_back(static_cast<double>(d));
    prof.sup_beta.push_back(static_cast<double>(sup));
  }

  std::vector<double> lx, ly;
  Eigen::Index begin = -1, end = -1;
  for (std::size_t k = 0; k < prof.radii.size(); ++k) {
    if (prof.sup_beta[k] <= 0) continue;
    if (begin < 0) begin = static_cast<Eigen::Index>(k);
    end = static_cast<Eigen::Index>(k) + 1;
    lx.push_back(std::log(prof.radii[k]));
    ly.push_back(std::log(prof.sup_beta[k]));
  }
  prof.fit_begin = std::max<Eigen::Index>(begin, 0);
  prof.fit_end = std::max<Eigen::Index>(end, 0);
  if (lx.size() >= 2) prof.fitted_exponent = detail::linear_fit(lx, ly).first;
  prof.kappa = q > Scalar(2) ? static_cast<double>((q - 2) / (q + 4)) : 0.0;
  prof.pass = prof.fitted_exponent >= prof.kappa - 0.1;
  return prof;
}

// Energy modulus at scale d, approximated over contiguous parameter
// windows of length d/100: max over ordered window pairs of the local pair
// energy, to the power 1/6. Contiguous windows only, so this is a lower
// bound for the supremum over measurable sets.
template <typename Scalar>
Scalar omega_e_estimate(const ArcCurveT<Scalar>& c, Scalar d, Scalar q = Scalar(2),
                        Eigen::Index exclusion_width = 2) {
  if (!(q >= Scalar(2))) throw std::invalid_argument("omega_e_estimate: q must be >= 2");
  if (!(d > Scalar(0)) || d > c.diameter() * Scalar(1 + 1e-9))
    throw std::invalid_argument("omega_e_estimate: scale must lie in (0, diam]");
  const Scalar h = c.spacing();
  const Scalar win = d / Scalar(100);
  if (win < h / Scalar(2))
    throw std::invalid_argument("omega_e_estimate: window d/100 below grid resolution");

  const Eigen::Index cells = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(win / h)));
  const Scalar actual = Scalar(cells) * h;
  const Scalar snap_correction = (win / actual) * (win / actual);

  const Eigen::Index m = c.size();
  const Eigen::Index nstarts = c.closed ? m : m - cells;
  if (nstarts <= 0) throw std::invalid_argument("omega_e_estimate: window longer than curve");
  const Scalar cap = std::pow(Scalar(1) / h, q);

  auto node_at = [&](Eigen::Index s, Eigen::Index off) { return c.closed ? (s + off) % m : s + off; };
  auto weight = [&](Eigen::Index off) {
    return (off == 0 || off == cells) ? Scalar(0.5) : Scalar(1);
  };

  double best = 0;
  for (Eigen::Index a0 = 0; a0 < nstarts; ++a0) {
    for (Eigen::Index b0 = 0; b0 < nstarts; ++b0) {
      double sum = 0;
      for (Eigen::Index ai = 0; ai <= cells; ++ai) {
        const Eigen::Index i = node_at(a0, ai);
        for (Eigen::Index bi = 0; bi <= cells; ++bi) {
          const Eigen::Index j = node_at(b0, bi);
          if (c.index_distance(i, j) <= exclusion_width) continue;
          bool capped = false;
          sum += static_cast<double>(weight(ai) * weight(bi) *
                                     detail::pair_integrand(c, i, j, q, cap, capped));
        }
      }
      best = std::max(best, sum);
    }
  }
  const double value = static_cast<double>(h * h) * best * static_cast<double>(snap_correction);
  return Scalar(std::pow(value, 1.0 / 6.0));
}

// Double-cone membership check: every node in B(x,2d) and B(y,2d) must
// lie in both double cones of opening angle phi spanned between x and y.
template <typename Scalar>
struct ConeCheckResult {
  Scalar s = 0, t = 0;
  Scalar d = 0;
  Scalar phi = 0;
  bool contained = false;
  Scalar worst_excess = 0;  // max angular excess over phi/2; <= 0 iff contained
  Vec<Scalar> worst_point;
};

namespace detail {

// angle between the line through v and the axis direction (both nonzero)
template <typename Scalar>
Scalar line_angle(const Vec<Scalar>& v, const Vec<Scalar>& axis) {
  const Scalar nv = v.norm(), na = axis.norm();
  if (nv == Scalar(0) || na == Scalar(0)) return Scalar(0);
  Scalar cosa = std::abs(v.dot(axis) / (nv * na));
  cosa = std::min(cosa, Scalar(1));
  return std::acos(cosa);
}

}  // namespace detail

template <typename Scalar>
ConeCheckResult<Scalar> cone_containment_check(const ArcCurveT<Scalar>& c, Scalar s, Scalar t,
                                               Scalar phi) {
  if (!(phi > Scalar(0) && phi < Scalar(std::numbers::pi) / 2))
    throw std::invalid_argument("cone_containment_check: phi must lie in (0, pi/2)");
  const Vec<Scalar> x = c.eval(s), y = c.eval(t);
  const Scalar d = (x - y).norm();
  if (d == Scalar(0))
    throw std::invalid_argument("cone_containment_check: curve points coincide");

  ConeCheckResult<Scalar> res;
  res.s = s;
  res.t = t;
  res.d = d;
  res.phi = phi;
  res.worst_excess = -phi / Scalar(2);
  res.worst_point = x;

  const Vec<Scalar> axis = y - x;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const auto z = c.nodes.col(j);
    if ((z - x).norm() > Scalar(2) * d || (z - y).norm() > Scalar(2) * d) continue;
    const Scalar ax = detail::line_angle<Scalar>((z - x).eval(), axis);
    const Scalar ay = detail::line_angle<Scalar>((z - y).eval(), (-axis).eval());
    const Scalar excess = std::max(ax, ay) - phi / Scalar(2);
    if (excess > res.worst_excess) {
      res.worst_excess = excess;
      res.worst_point = z;
    }
  }
  res.contained = res.worst_excess <= Scalar(0);
  return res;
}

// Chord-to-arc ratio extremes over node pairs with intrinsic distance up to
// d_max. The upper ratio can never exceed 1 (chord <= arc).
template <typename Scalar>
struct BilipschitzReport {
  Scalar min_ratio = 1;
  Scalar max_ratio = 0;
  Eigen::Index argmin_i = 0, argmin_j = 0;
};

template <typename Scalar>
BilipschitzReport<Scalar> bilipschitz_report(const ArcCurveT<Scalar>& c, Scalar d_max) {
  if (!(d_max > Scalar(0))) throw std::invalid_argument("bilipschitz_report: d_max must be > 0");
  BilipschitzReport<Scalar> rep;
  rep.min_ratio = infinity<Scalar>();
  const Eigen::Index m = c.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const Scalar sep = c.separation(i, j);
      if (sep <= Scalar(0) || sep > d_max) continue;
      const Scalar ratio = (c.nodes.col(i) - c.nodes.col(j)).norm() / sep;
      if (ratio < rep.min_ratio) {
        rep.min_ratio = ratio;
        rep.argmin_i = i;
        rep.argmin_j = j;
      }
      rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
  }
  if (!std::isfinite(static_cast<double>(rep.min_ratio))) rep.min_ratio = Scalar(1);
  return rep;
}

// Secant-slab inclusion diagnostic: largest node distance to the secant
// line G(x, y) over the ball B(x, 2d), plus the minimal epsilon and c_0
// that would make the inclusion eps^(q+4) d^(2-q) >= c_0 E pass here.
template <typename Scalar>
struct SecantSlabReport {
  Scalar d = 0;
  Scalar max_dist = 0;   // max over nodes in B(x, 2d) of dist to G(x,y)
  Scalar eps_min = 0;    // max_dist / (20 d)
  Scalar c0_min = 0;     // eps_min^(q+4) d^(2-q) / E
};

template <typename Scalar>
SecantSlabReport<Scalar> secant_slab_report(const ArcCurveT<Scalar>& c, Eigen::Index i,
                                            Eigen::Index j, Scalar q, Scalar energy_value) {
  const auto x = c.nodes.col(i);
  const auto y = c.nodes.col(j);
  const Scalar d = (x - y).norm();
  if (d == Scalar(0)) throw std::invalid_argument("secant_slab_report: coincident nodes");
  const Vec<Scalar> dir = (y - x).normalized();
  SecantSlabReport<Scalar> rep;
  rep.d = d;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const auto z = c.nodes.col(k);
    if ((z - x).norm() > Scalar(2) * d) continue;
    const auto rel = (z - x).eval();
    rep.max_dist = std::max(rep.max_dist, (rel - rel.dot(dir) * dir).norm());
  }
  rep.eps_min = rep.max_dist / (Scalar(20) * d);
  rep.c0_min = energy_value > Scalar(0)
                   ? std::pow(rep.eps_min, q + Scalar(4)) * std::pow(d, Scalar(2) - q) / energy_value
                   : Scalar(0);
  return rep;
}

}  // namespace tpc
