#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpcurve/energy.hpp"
#include "tpcurve/knot.hpp"
#include "tpcurve/parallel.hpp"
#include "tpcurve/resample.hpp"
#include "tpcurve/types.hpp"

namespace tpc {

template <typename Scalar>
struct GradientResult {
  Points<Scalar> field;  // dim x m, d(energy)/d(node)
  bool capped = false;   // a near-contact pair hit the integrand cap
};

// Analytic gradient of the fixed-weight energy quadrature with respect to
// the node coordinates. The pair kernel g = (2|P|/|u|^2)^q depends on the
// two endpoints and, through the central-difference tangent, on the first
// node's neighbours:
//   grad_u g   = q g (P/|P|^2 - 2u/|u|^2)
//   grad_w g   = -q g (u.t)/|P|^2 P / |w|,  w the tangent stencil difference.
// Capped pairs contribute a constant and therefore no gradient.
template <typename Scalar>
GradientResult<Scalar> discrete_gradient(const ArcCurveT<Scalar>& c, Scalar q,
                                         Eigen::Index exclusion_width = 2) {
  c.validate();
  if (!(q > Scalar(0))) throw std::invalid_argument("discrete_gradient: q must be positive");
  const Eigen::Index m = c.size();
  const Scalar h = c.spacing();
  const Scalar cap = std::pow(Scalar(1) / h, q);
  const Scalar w2 = h * h;

  GradientResult<Scalar> out;
  out.field = Points<Scalar>::Zero(c.dim(), m);

  auto stencil = [&](Eigen::Index i, Eigen::Index& lo, Eigen::Index& hi) {
    if (c.closed) {
      lo = (i - 1 + m) % m;
      hi = (i + 1) % m;
    } else if (i == 0) {
      lo = 0;
      hi = 1;
    } else if (i == m - 1) {
      lo = m - 2;
      hi = m - 1;
    } else {
      lo = i - 1;
      hi = i + 1;
    }
  };

  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index lo, hi;
    stencil(i, lo, hi);
    const auto t = c.tangents.col(i);
    const Scalar wlen = (c.nodes.col(hi) - c.nodes.col(lo)).norm();
    for (Eigen::Index j = 0; j < m; ++j) {
      if (c.index_distance(i, j) <= exclusion_width) continue;
      const auto u = (c.nodes.col(j) - c.nodes.col(i)).eval();
      const Scalar d2 = u.squaredNorm();
      const Scalar d = std::sqrt(d2);
      if (d <= Scalar(0)) {
        out.capped = true;
        continue;
      }
      const auto P = (u - u.dot(t) * t).eval();
      const Scalar p = P.norm();
      if (p <= Scalar(1e-12) * d) continue;  // r = infinity, zero contribution
      const Scalar g = std::pow(Scalar(2) * p / d2, q);
      if (g > cap) {
        out.capped = true;
        continue;  // capped region is flat
      }
      const auto du = (q * g * (P / (p * p) - Scalar(2) * u / d2)).eval();
      out.field.col(j) += w2 * du;
      out.field.col(i) -= w2 * du;
      const auto dw = (-(q * g * u.dot(t) / (p * p)) / wlen * P).eval();
      out.field.col(hi) += w2 * dw;
      out.field.col(lo) -= w2 * dw;
    }
  }
  return out;
}

enum class FlowTermination { converged, max_iters, stalled };

template <typename Scalar>
struct FlowTraceT {
  std::vector<ArcCurveT<Scalar>> iterates;  // thinned snapshots (always keeps the final state)
  std::vector<double> energies;             // per accepted step
  std::vector<double> step_sizes;
  std::vector<double> length_residuals;     // |L_k - L_0| / L_0 after projection
  FlowTermination terminated = FlowTermination::max_iters;

  const ArcCurveT<Scalar>& final_curve() const { return iterates.back(); }
};

using FlowTrace = FlowTraceT<double>;

namespace detail {

template <typename Scalar>
Scalar polygon_length(const Points<Scalar>& pts, bool closed) {
  Scalar L = 0;
  const Eigen::Index n = pts.cols();
  const Eigen::Index last = closed ? n : n - 1;
  for (Eigen::Index i = 0; i < last; ++i) L += (pts.col((i + 1) % n) - pts.col(i)).norm();
  return L;
}

// rebuilds tangents and rescales uniformly about the centroid so the node
// polygon keeps its initial length
template <typename Scalar>
ArcCurveT<Scalar> project_curve(Points<Scalar> pts, bool closed, Scalar L0) {
  const Scalar L = polygon_length(pts, closed);
  if (!(L > Scalar(0))) throw std::runtime_error("flow: degenerate iterate");
  const Vec<Scalar> centroid = pts.rowwise().mean();
  const Scalar s = L0 / L;
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    pts.col(i) = centroid + s * (pts.col(i) - centroid);
  ArcCurveT<Scalar> c;
  c.nodes = std::move(pts);
  c.closed = closed;
  c.length = L0;
  c.tangents.resize(c.nodes.rows(), c.nodes.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c.tangents.col(i) = tangent_estimate(c, i);
  return c;
}

}  // namespace detail

struct MinimizeOptions {
  Eigen::Index max_iters = 2000;
  double tol = 1e-8;
  Eigen::Index exclusion_width = 2;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  Eigen::Index resample_every = 10;
  Eigen::Index keep_iterates = 50;
};

// Fixed-length projected gradient descent on the discrete energy: step along
// the negative gradient with Armijo backtracking, rescale to the initial
// length after every step, redistribute nodes every resample_every accepted
// steps. Energies are recorded per accepted step and never increase.
template <typename Scalar>
FlowTraceT<Scalar> minimize(const ArcCurveT<Scalar>& input, Scalar q,
                            const MinimizeOptions& opts = {}) {
  if (!(q > Scalar(2))) throw std::invalid_argument("minimize: q must be > 2");
  {
    const auto screen = injectivity_screen(input, Scalar(2) * input.spacing());
    if (!screen.pass) throw std::runtime_error("minimize: injectivity screen failed");
  }

  const Eigen::Index m = input.size();
  const bool closed = input.closed;
  const Scalar L0 = detail::polygon_length(input.nodes, closed);
  ArcCurveT<Scalar> cur = detail::project_curve(Points<Scalar>(input.nodes), closed, L0);

  FlowTraceT<Scalar> trace;
  const Eigen::Index thin = std::max<Eigen::Index>(1, opts.max_iters / opts.keep_iterates);

  double e_cur = energy(cur, q, opts.exclusion_width).value;
  trace.energies.push_back(e_cur);
  trace.iterates.push_back(cur);
  trace.length_residuals.push_back(0);
  trace.step_sizes.push_back(0);

  Scalar step = Scalar(0);
  Eigen::Index accepted = 0;
  trace.terminated = FlowTermination::max_iters;

  for (Eigen::Index iter = 0; iter < opts.max_iters; ++iter) {
    const auto grad = discrete_gradient(cur, q, opts.exclusion_width);
    // remove the dilation mode: the length projection cancels it, so descent
    // has to come from the shape-changing component alone
    Points<Scalar> dir = grad.field;
    {
      const Vec<Scalar> centroid = cur.nodes.rowwise().mean();
      Points<Scalar> dil = cur.nodes.colwise() - centroid;
      const Scalar dd = dil.squaredNorm();
      if (dd > Scalar(0))
        dir -= ((dir.array() * dil.array()).sum() / dd) * dil;
    }
    const Scalar gnorm2 = dir.squaredNorm();
    if (gnorm2 <= Scalar(1e-24) * std::max(Scalar(1), grad.field.squaredNorm())) {
      trace.terminated = FlowTermination::converged;  // critical on the manifold
      break;
    }
    if (step <= Scalar(0)) {
      const Scalar gmax = dir.cwiseAbs().maxCoeff();
      step = Scalar(0.05) * cur.spacing() / std::max(gmax, Scalar(1e-30));
    } else {
      step *= Scalar(2);  // optimistic growth, backtracking trims it
    }

    bool ok = false;
    while (step > Scalar(1e-14) * L0) {
      Points<Scalar> cand_pts = cur.nodes - step * dir;
      ArcCurveT<Scalar> cand;
      try {
        cand = detail::project_curve(std::move(cand_pts), closed, L0);
      } catch (const std::exception&) {
        step *= Scalar(opts.backtrack);
        continue;
      }
      const double e_cand = energy(cand, q, opts.exclusion_width).value;
      if (e_cand <= e_cur - opts.armijo_c * static_cast<double>(step * gnorm2)) {
        cur = std::move(cand);
        e_cur = e_cand;
        ok = true;
        break;
      }
      step *= Scalar(opts.backtrack);
    }
    if (!ok) {
      trace.terminated = FlowTermination::stalled;
      break;
    }

    ++accepted;
    trace.energies.push_back(e_cur);
    trace.step_sizes.push_back(static_cast<double>(step));
    trace.length_residuals.push_back(static_cast<double>(
        std::abs(detail::polygon_length(cur.nodes, closed) - L0) / L0));
    if (accepted % thin == 0) trace.iterates.push_back(cur);

    // periodic reparametrization keeps nodes from clustering; skipped when it
    // would raise the recorded energy
    if (accepted % opts.resample_every == 0) {
      ArcCurveT<Scalar> redistributed = resample_arclength(cur.as_polyline(), m);
      redistributed = detail::project_curve(std::move(redistributed.nodes), closed, L0);
      const double e_res = energy(redistributed, q, opts.exclusion_width).value;
      if (e_res <= e_cur) {
        cur = std::move(redistributed);
        e_cur = e_res;
      }
    }

    // converged when the relative decrease over the trailing window is tiny
    const Eigen::Index window = 20;
    if (static_cast<Eigen::Index>(trace.energies.size()) > window) {
      const double e_old = trace.energies[trace.energies.size() - 1 - window];
      if ((e_old - e_cur) / std::max(std::abs(e_old), 1e-30) < opts.tol) {
        trace.terminated = FlowTermination::converged;
        break;
      }
    }
  }

  if (trace.iterates.empty() || (trace.iterates.back().nodes - cur.nodes).norm() > Scalar(0))
    trace.iterates.push_back(cur);
  return trace;
}

struct PullTightEntry {
  double gap = 0;
  double energy = 0;
};

struct PullTightResult {
  std::vector<PullTightEntry> entries;
  double loglog_slope = 0;
};

// Fixed family of smooth closed curves approaching a transversal self
// crossing: a Gerono figure-eight lifted out of plane by gap/2, so the two
// near-orthogonal lobes pass at distance = gap.
template <typename Scalar>
PolylineT<Scalar> pull_tight_curve(Scalar gap, Eigen::Index samples = 2048) {
  PolylineT<Scalar> p;
  p.closed = true;
  p.points.resize(3, samples);
  for (Eigen::Index i = 0; i < samples; ++i) {
    const Scalar t = Scalar(2) * Scalar(std::numbers::pi) * Scalar(i) / Scalar(samples);
    p.points.col(i) << std::cos(t), std::sin(t) * std::cos(t), gap / Scalar(2) * std::sin(t);
  }
  return p;
}

template <typename Scalar>
PullTightResult pull_tight_experiment(const std::vector<Scalar>& gaps, Scalar q,
                                      Eigen::Index m = 1600, Eigen::Index exclusion_width = 2) {
  if (gaps.empty()) throw std::invalid_argument("pull_tight_experiment: no gaps");
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (!(gaps[i] > Scalar(0)))
      throw std::invalid_argument("pull_tight_experiment: gaps must be positive");
    if (i > 0 && gaps[i] >= gaps[i - 1])
      throw std::invalid_argument("pull_tight_experiment: gaps must be decreasing");
  }

  PullTightResult res;
  std::vector<double> lx, ly;
  for (Scalar gap : gaps) {
    const ArcCurveT<Scalar> c = resample_arclength(pull_tight_curve(gap), m);
    if (gap < Scalar(4) * c.spacing())
      throw std::invalid_argument("pull_tight_experiment: gap below grid resolution");
    const double e = energy(c, q, exclusion_width).value;
    res.entries.push_back({static_cast<double>(gap), e});
    lx.push_back(std::log(static_cast<double>(gap)));
    ly.push_back(std::log(e));
  }
  if (lx.size() >= 2) res.loglog_slope = detail::linear_fit(lx, ly).first;
  return res;
}

}  // namespace tpc
