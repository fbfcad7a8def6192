#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpcurve/energy.hpp"
#include "tpcurve/parallel.hpp"
#include "tpcurve/types.hpp"

namespace tpc {

// |Gamma'(u) - Gamma'(v)| via the estimated node tangents; the chord of unit
// vectors, equal to 2 sin(angle/2).
template <typename Scalar>
Scalar tangent_oscillation(const ArcCurveT<Scalar>& c, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || i >= c.size() || j < 0 || j >= c.size())
    throw std::invalid_argument("tangent_oscillation: node index out of range");
  return (c.tangents.col(i) - c.tangents.col(j)).norm();
}

template <typename Scalar>
Scalar tangent_oscillation_at(const ArcCurveT<Scalar>& c, Scalar u, Scalar v) {
  const Scalar h = c.spacing();
  auto snap = [&](Scalar s) {
    Eigen::Index i = static_cast<Eigen::Index>(std::llround(s / h));
    if (c.closed) {
      i %= c.size();
      if (i < 0) i += c.size();
    } else {
      i = std::clamp<Eigen::Index>(i, 0, c.size() - 1);
    }
    return i;
  };
  return tangent_oscillation(c, snap(u), snap(v));
}

struct HoelderFit {
  double exponent = 0;
  double constant = 0;  // multiplicative constant exp(intercept)
  Eigen::Index pair_count = 0;
  double gap_min = 0, gap_max = 0;
  double residual = 0;  // RMS log-log fit residual
  std::vector<std::string> flags;
};

// Fits the Hoelder exponent of the tangent: log max-oscillation against log
// gap over logarithmically spaced gaps, the max taken over uniformly placed
// pairs at each gap.
template <typename Scalar>
HoelderFit hoelder_fit(const ArcCurveT<Scalar>& c, Scalar gap_min, Scalar gap_max,
                       Eigen::Index pair_count = 128, Eigen::Index n_gaps = 8) {
  const Scalar h = c.spacing();
  if (!(gap_min > Scalar(0)) || !(gap_max > gap_min))
    throw std::invalid_argument("hoelder_fit: need 0 < gap_min < gap_max");
  if (gap_min < Scalar(2) * h)
    throw std::invalid_argument("hoelder_fit: gap_min below grid resolution");
  if (gap_max > c.length / Scalar(2) * Scalar(1 + 1e-12))
    throw std::invalid_argument("hoelder_fit: gap_max above L/2");
  if (pair_count < 100) throw std::invalid_argument("hoelder_fit: pair_count must be >= 100");
  if (n_gaps < 3) throw std::invalid_argument("hoelder_fit: need at least 3 gaps");

  HoelderFit fit;
  fit.pair_count = pair_count;
  fit.gap_min = static_cast<double>(gap_min);
  fit.gap_max = static_cast<double>(gap_max);

  std::vector<double> lx, ly;
  const double lg0 = std::log(static_cast<double>(gap_min));
  const double lg1 = std::log(static_cast<double>(gap_max));
  for (Eigen::Index gi = 0; gi < n_gaps; ++gi) {
    const double lg = lg0 + (lg1 - lg0) * static_cast<double>(gi) / static_cast<double>(n_gaps - 1);
    const Scalar gap = Scalar(std::exp(lg));
    const Scalar u_span = c.closed ? c.length : c.length - gap;
    Scalar worst = 0;
    for (Eigen::Index k = 0; k < pair_count; ++k) {
      const Scalar u = u_span * Scalar(k) / Scalar(pair_count);
      worst = std::max(worst, tangent_oscillation_at(c, u, u + gap));
    }
    if (worst > Scalar(1e-14)) {
      lx.push_back(lg);
      ly.push_back(std::log(static_cast<double>(worst)));
    }
  }

  if (lx.size() < 2) {
    fit.exponent = 1.0;
    fit.flags.push_back("flat");
    return fit;
  }
  const auto [slope, intercept] = detail::linear_fit(lx, ly);
  fit.exponent = slope;
  fit.constant = std::exp(intercept);
  double ss = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double r = ly[k] - (slope * lx[k] + intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(lx.size()));
  return fit;
}

struct MainEstimateReport {
  double q = 0;
  double lambda = 0;  // 1 - 2/q
  double max_ratio = 0;
  double argmax_u = 0, argmax_v = 0;
  double cutoff = 0;
  std::vector<std::string> flags;
};

// Empirical minimal constant of the main estimate: the largest ratio
//   |Gamma'(u)-Gamma'(v)| / (local_energy(u,v)^{1/q} |u-v|^{1-2/q})
// over deterministically sampled parameter pairs with |u-v| below the cutoff.
template <typename Scalar>
MainEstimateReport verify_main_estimate(const ArcCurveT<Scalar>& c, Scalar q,
                                        Eigen::Index pair_count = 200,
                                        Scalar cutoff_fraction = Scalar(1) / Scalar(8),
                                        std::uint64_t seed = 0,
                                        Eigen::Index exclusion_width = 2) {
  if (!(q > Scalar(2))) throw std::invalid_argument("verify_main_estimate: q must be > 2");
  const Scalar h = c.spacing();
  const Scalar cutoff = std::min(c.length * cutoff_fraction, c.diameter() / Scalar(2));
  const Scalar gap_floor = Scalar(8) * h;
  if (gap_floor >= cutoff)
    throw std::invalid_argument("verify_main_estimate: resolution too coarse for the cutoff");

  MainEstimateReport rep;
  rep.q = static_cast<double>(q);
  rep.lambda = static_cast<double>(1 - 2 / q);
  rep.cutoff = static_cast<double>(cutoff);

  const Eigen::Index n_gaps = std::max<Eigen::Index>(4, pair_count / 25);
  const Eigen::Index per_gap = std::max<Eigen::Index>(1, pair_count / n_gaps);
  const double lg0 = std::log(static_cast<double>(gap_floor));
  const double lg1 = std::log(static_cast<double>(cutoff));
  std::uint64_t ctr = 0;

  for (Eigen::Index gi = 0; gi < n_gaps; ++gi) {
    const double lg = lg0 + (lg1 - lg0) * static_cast<double>(gi) / static_cast<double>(n_gaps - 1);
    // snap the gap to whole grid cells so the window quadrature is aligned
    Eigen::Index cells = static_cast<Eigen::Index>(std::llround(std::exp(lg) / static_cast<double>(h)));
    cells = std::max<Eigen::Index>(cells, 5);
    const Scalar gap = Scalar(cells) * h;
    for (Eigen::Index k = 0; k < per_gap; ++k) {
      const Scalar u_span = c.closed ? c.length : c.length - gap;
      // the first sample per gap pins the window to the parameter start, so
      // open-curve endpoints are always covered
      Eigen::Index a = k == 0 ? 0
                              : static_cast<Eigen::Index>(std::floor(
                                    kronecker(seed, ctr++) * static_cast<double>(u_span / h)));
      a = std::clamp<Eigen::Index>(a, 0, c.size() - 1);
      const Eigen::Index b = c.closed ? (a + cells) % c.size() : std::min(a + cells, c.size() - 1);
      const Scalar u = c.param(a);
      const Scalar v = u + Scalar(cells) * h;

      const Scalar osc = tangent_oscillation(c, a, b);
      const Scalar eloc = local_energy(c, u, v, q, exclusion_width);
      if (eloc <= Scalar(0)) {
        if (osc > Scalar(1e-12)) rep.flags.push_back("zero_local_energy_with_oscillation");
        continue;
      }
      const double ratio = static_cast<double>(
          osc / (std::pow(eloc, Scalar(1) / q) * std::pow(v - u, Scalar(1) - Scalar(2) / q)));
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.argmax_u = static_cast<double>(u);
        rep.argmax_v = static_cast<double>(v);
      }
    }
  }
  return rep;
}

}  // namespace tpc
