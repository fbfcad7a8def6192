#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tpcurve/parallel.hpp"
#include "tpcurve/primitives.hpp"
#include "tpcurve/resample.hpp"
#include "tpcurve/shapes.hpp"
#include "tpcurve/types.hpp"

namespace tpc {

// One tangent-point radius evaluation, kept with its inputs.
template <typename Scalar>
struct RadiusSampleT {
  Vec<Scalar> base;
  Vec<Scalar> tangent;
  Vec<Scalar> target;
  Scalar radius;
};

template <typename Scalar>
RadiusSampleT<Scalar> radius_sample(const Vec<Scalar>& base, const Vec<Scalar>& tangent,
                                    const Vec<Scalar>& target) {
  return {base, tangent, target, tangent_point_radius(base, tangent, target)};
}

using RadiusSample = RadiusSampleT<double>;

// Discrete E_q value plus the quadrature metadata needed to reproduce it.
struct EnergyReport {
  double value = 0;
  double q = 2;
  Eigen::Index m = 0;
  Eigen::Index exclusion_width = 2;
  double max_integrand = 0;
  double length = 0;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
  }
};

namespace detail {

// 1/r^q for the ordered pair (i -> j), tangent taken at i. Off-diagonal
// coincidences contribute the capped value (1/h)^q instead of blowing up.
template <typename Scalar>
Scalar pair_integrand(const ArcCurveT<Scalar>& c, Eigen::Index i, Eigen::Index j, Scalar q,
                      Scalar cap, bool& capped) {
  const auto u = (c.nodes.col(j) - c.nodes.col(i)).eval();
  const Scalar d = u.norm();
  if (d <= Scalar(0)) {
    capped = true;
    return cap;
  }
  const auto t = c.tangents.col(i);
  const Scalar p = (u - u.dot(t) * t).norm();
  if (p <= Scalar(1e-12) * d) return Scalar(0);  // r = infinity
  const Scalar inv_r = Scalar(2) * p / (d * d);
  Scalar val = std::pow(inv_r, q);
  if (val > cap) {
    capped = true;
    return cap;
  }
  return val;
}

struct EnergyPartial {
  double sum = 0;
  double max_integrand = 0;
  bool capped = false;
};

}  // namespace detail

// Trapezoidal double sum of 1/r^q over ordered node pairs whose intrinsic
// separation exceeds exclusion_width grid cells; both orderings are summed,
// so the value approximates the full symmetric double integral.
template <typename Scalar>
EnergyReport energy(const ArcCurveT<Scalar>& c, Scalar q, Eigen::Index exclusion_width = 2) {
  c.validate();
  if (!(q > Scalar(0))) throw std::invalid_argument("energy: q must be positive");
  if (exclusion_width < 1) throw std::invalid_argument("energy: exclusion_width must be >= 1");
  if (c.size() < 16) throw std::invalid_argument("energy: need at least 16 nodes");

  const Eigen::Index m = c.size();
  const Scalar h = c.spacing();
  const Scalar cap = std::pow(Scalar(1) / h, q);

  auto partial = detail::EnergyPartial{};
  auto result = block_map_reduce(
      Eigen::Index(0), m, partial,
      [&](Eigen::Index lo, Eigen::Index hi) {
        detail::EnergyPartial p;
        for (Eigen::Index i = lo; i < hi; ++i) {
          for (Eigen::Index j = 0; j < m; ++j) {
            if (c.index_distance(i, j) <= exclusion_width) continue;
            bool capped = false;
            const Scalar v = detail::pair_integrand(c, i, j, q, cap, capped);
            p.sum += static_cast<double>(v);
            p.max_integrand = std::max(p.max_integrand, static_cast<double>(v));
            p.capped |= capped;
          }
        }
        return p;
      },
      [](detail::EnergyPartial& acc, const detail::EnergyPartial& p) {
        acc.sum += p.sum;
        acc.max_integrand = std::max(acc.max_integrand, p.max_integrand);
        acc.capped |= p.capped;
      });

  EnergyReport rep;
  rep.value = static_cast<double>(h * h) * result.sum;
  rep.q = static_cast<double>(q);
  rep.m = m;
  rep.exclusion_width = exclusion_width;
  rep.max_integrand = result.max_integrand;
  rep.length = static_cast<double>(c.length);
  if (result.capped) rep.flags.push_back("capped_integrand");
  return rep;
}

// Same quadrature restricted to the sub-arc [u, v] (arclength parameters;
// v may exceed L on closed curves to express a wrapping window).
template <typename Scalar>
Scalar local_energy(const ArcCurveT<Scalar>& c, Scalar u, Scalar v, Scalar q,
                    Eigen::Index exclusion_width = 2) {
  if (!(u < v)) throw std::invalid_argument("local_energy: need u < v");
  if (v - u > c.length + Scalar(1e-9) * c.length)
    throw std::invalid_argument("local_energy: window longer than one period");
  const Scalar h = c.spacing();
  if (v - u < Scalar(4) * h)
    throw std::invalid_argument("local_energy: sub-arc below resolution (need >= 4 grid cells)");

  const Eigen::Index m = c.size();
  std::vector<Eigen::Index> in_window;
  for (Eigen::Index i = 0; i < m; ++i) {
    Scalar t = c.param(i);
    bool inside = (t >= u - Scalar(1e-12) * c.length && t <= v + Scalar(1e-12) * c.length);
    if (!inside && c.closed) {
      const Scalar tw = t + c.length;
      inside = (tw >= u - Scalar(1e-12) * c.length && tw <= v + Scalar(1e-12) * c.length);
    }
    if (inside) in_window.push_back(i);
  }

  const Scalar cap = std::pow(Scalar(1) / h, q);
  double sum = 0;
  for (Eigen::Index a : in_window) {
    for (Eigen::Index b : in_window) {
      if (c.index_distance(a, b) <= exclusion_width) continue;
      bool capped = false;
      sum += static_cast<double>(detail::pair_integrand(c, a, b, q, cap, capped));
    }
  }
  return Scalar(static_cast<double>(h * h) * sum);
}

// L^{q-2} E_q: invariant under dilation of the curve.
template <typename Scalar>
Scalar scale_invariant_energy(const ArcCurveT<Scalar>& c, Scalar q,
                              Eigen::Index exclusion_width = 2) {
  const EnergyReport rep = energy(c, q, exclusion_width);
  return std::pow(c.length, q - Scalar(2)) * Scalar(rep.value);
}

enum class RefineTrend { converged, diverging };

struct RefineResult {
  std::vector<EnergyReport> reports;
  RefineTrend trend = RefineTrend::converged;
  double final_ratio = 1.0;
};

// Energy under grid refinement. The exclusion stays at the same cell count on
// every level, so its arclength extent shrinks with m and corner spikes enter
// the sum as the grid resolves them. Classified diverging when the values
// strictly increase and the final ratio exceeds the threshold.
template <typename Scalar>
RefineResult refine_energy(const PolylineT<Scalar>& p, Scalar q,
                           const std::vector<Eigen::Index>& levels,
                           Eigen::Index exclusion_width = 2, double ratio_threshold = 1.1) {
  if (levels.size() < 3) throw std::invalid_argument("refine_energy: need at least 3 levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("refine_energy: levels must be strictly increasing");

  RefineResult res;
  for (Eigen::Index m : levels) {
    const ArcCurveT<Scalar> c = resample_arclength(p, m);
    res.reports.push_back(energy(c, q, exclusion_width));
  }
  bool strictly_increasing = true;
  for (std::size_t i = 1; i < res.reports.size(); ++i)
    strictly_increasing &= res.reports[i].value > res.reports[i - 1].value;
  const double last = res.reports.back().value;
  const double prev = res.reports[res.reports.size() - 2].value;
  res.final_ratio = prev > 0 ? last / prev : 1.0;
  res.trend = (strictly_increasing && res.final_ratio > ratio_threshold)
                  ? RefineTrend::diverging
                  : RefineTrend::converged;
  return res;
}

template <typename Scalar>
RefineResult refine_energy(const ShapeSpec& spec, Scalar q,
                           const std::vector<Eigen::Index>& levels,
                           Eigen::Index exclusion_width = 2, double ratio_threshold = 1.1) {
  return refine_energy(generate<Scalar>(spec), q, levels, exclusion_width, ratio_threshold);
}

struct ThicknessLimitEntry {
  double q;
  double eq_root;     // E_q^{1/q}
  double normalized;  // E_q^{1/q} L^{-2/q}, the length-corrected value
};

struct ThicknessLimitCheck {
  std::vector<ThicknessLimitEntry> entries;
  double inverse_thickness = 0;  // filled by the caller when thickness is known
};

// E_q^{1/q} for a list of exponents q > 2, together with the L^{2/q}
// correction that makes the q -> infinity limit comparable to 1/thickness.
template <typename Scalar>
ThicknessLimitCheck thickness_limit_check(const ArcCurveT<Scalar>& c,
                                          const std::vector<Scalar>& q_list,
                                          Eigen::Index exclusion_width = 2) {
  for (std::size_t i = 0; i < q_list.size(); ++i) {
    if (!(q_list[i] > Scalar(2)))
      throw std::invalid_argument("thickness_limit_check: exponents must be > 2");
    if (i > 0 && q_list[i] <= q_list[i - 1])
      throw std::invalid_argument("thickness_limit_check: exponents must be increasing");
  }
  ThicknessLimitCheck out;
  for (Scalar q : q_list) {
    const EnergyReport rep = energy(c, q, exclusion_width);
    const double root = rep.value > 0 ? std::pow(rep.value, 1.0 / static_cast<double>(q)) : 0.0;
    const double norm = root * std::pow(static_cast<double>(c.length),
                                        -2.0 / static_cast<double>(q));
    out.entries.push_back({static_cast<double>(q), root, norm});
  }
  return out;
}

}  // namespace tpc
