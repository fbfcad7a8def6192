#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "tpcurve/flow.hpp"
#include "tpcurve/resample.hpp"
#include "tpcurve/shapes.hpp"

using namespace tpc;
using std::numbers::pi;

namespace {

ArcCurve unit_circle(Eigen::Index m) {
  return resample_arclength(
      generate({ShapeKind::circle, {{"radius", 1.0}, {"samples", 4096.0}}}), m);
}

ArcCurve perturbed(double amp, int mode, Eigen::Index m, double radius = 1.0) {
  return resample_arclength(generate({ShapeKind::perturbed_circle,
                                      {{"radius", radius},
                                       {"amplitude", amp},
                                       {"mode", double(mode)},
                                       {"samples", 4096.0}}}),
                            m);
}

}  // namespace

TEST_CASE("discrete_gradient: radial by symmetry on the circle") {
  auto c = unit_circle(128);
  auto g = discrete_gradient(c, 3.0);
  CHECK_FALSE(g.capped);
  double max_radial = 0, max_tangential = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const Vec<double> radial = c.nodes.col(i).normalized();
    const double r = g.field.col(i).dot(radial);
    const double t = (g.field.col(i) - r * radial).norm();
    max_radial = std::max(max_radial, std::abs(r));
    max_tangential = std::max(max_tangential, t);
  }
  CHECK(max_tangential < 1e-6 * max_radial);
}

TEST_CASE("discrete_gradient: matches central finite differences") {
  // 4 curves x a handful of coordinates each; the acceptance suite runs the
  // denser 100-coordinate sweep
  std::vector<ArcCurve> curves;
  curves.push_back(perturbed(0.05, 3, 48));
  curves.push_back(perturbed(0.12, 5, 48));
  curves.push_back(perturbed(0.08, 2, 48, 2.0));
  {
    auto tk = generate({ShapeKind::torus_knot,
                        {{"p", 2.0}, {"q", 3.0}, {"major_radius", 3.0}, {"minor_radius", 1.0},
                         {"samples", 2048.0}}});
    curves.push_back(resample_arclength(tk, 48));
  }
  const double q = 3.0;
  for (const auto& c : curves) {
    auto g = discrete_gradient(c, q);
    const double scale = g.field.cwiseAbs().maxCoeff();
    const double eps = 1e-6 * c.length;
    for (Eigen::Index node = 0; node < c.size(); node += 11) {
      for (Eigen::Index coord = 0; coord < c.dim(); ++coord) {
        const double fd = oracles::energy_fd(c, q, 2, node, coord, eps);
        const double an = g.field(coord, node);
        CHECK(std::abs(fd - an) <= 1e-4 * std::max(std::abs(an), 1e-3 * scale));
      }
    }
  }
}

TEST_CASE("discrete_gradient: directional derivative against the energy") {
  auto c = perturbed(0.1, 4, 64);
  const double q = 3.0;
  auto g = discrete_gradient(c, q);
  // deterministic pseudo-random direction
  Points<double> dir(c.dim(), c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    for (Eigen::Index r = 0; r < c.dim(); ++r)
      dir(r, i) = std::sin(3.7 * double(i) + 1.3 * double(r)) * 0.5 + 0.1;
  const double eps = 1e-6 * c.length;
  auto shifted = [&](double s) {
    ArcCurve p = c;
    p.nodes += s * dir;
    for (Eigen::Index k = 0; k < p.size(); ++k) p.tangents.col(k) = tangent_estimate(p, k);
    return energy(p, q, 2).value;
  };
  const double fd = (shifted(eps) - shifted(-eps)) / (2 * eps);
  const double an = (g.field.array() * dir.array()).sum();
  CHECK(fd == doctest::Approx(an).epsilon(1e-4));
}

TEST_CASE("discrete_gradient: straight open segment has zero gradient") {
  Polyline seg;
  seg.closed = false;
  seg.points.resize(2, 2);
  seg.points.col(0) << 0, 0;
  seg.points.col(1) << 1, 0;
  auto c = resample_arclength(seg, 64);
  auto g = discrete_gradient(c, 3.0);
  CHECK(g.field.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("discrete_gradient: dilation equivariance") {
  auto c = unit_circle(64);
  ArcCurve scaled = c;
  scaled.nodes *= 2.0;
  scaled.length *= 2.0;
  const double q = 3.0;
  auto g1 = discrete_gradient(c, q);
  auto g2 = discrete_gradient(scaled, q);
  // differentiating E(s c) = s^{2-q} E(c) in the node positions gives s^{1-q}
  const double factor = std::pow(2.0, 1.0 - q);
  CHECK((g2.field - factor * g1.field).cwiseAbs().maxCoeff() <
        1e-9 * g1.field.cwiseAbs().maxCoeff());
}

TEST_CASE("minimize: perturbed circle descends to the round circle energy") {
  auto c = perturbed(0.05, 3, 128);
  const double q = 3.0;
  MinimizeOptions opts;
  opts.max_iters = 2000;
  opts.tol = 1e-8;
  auto trace = minimize(c, q, opts);

  // discrete closed form for the round circle of the same length:
  // every included pair contributes 1/r0^q, r0 = L/(2 pi)
  const double L = trace.final_curve().length;
  const double r0 = L / (2 * pi);
  const double m = 128, w = 2;
  const double target = L * L * ((m - 1 - 2 * w) / m) / std::pow(r0, q);
  CHECK(trace.energies.back() == doctest::Approx(target).epsilon(0.02));

  for (std::size_t i = 1; i < trace.energies.size(); ++i)
    CHECK(trace.energies[i] <= trace.energies[i - 1] + 1e-12);
  for (double r : trace.length_residuals) CHECK(r <= 1e-6);
}

TEST_CASE("minimize: round circle is already critical") {
  auto c = unit_circle(96);
  MinimizeOptions opts;
  opts.max_iters = 200;
  opts.tol = 1e-8;
  auto trace = minimize(c, 3.0, opts);
  CHECK(trace.terminated == FlowTermination::converged);
  CHECK(trace.energies.back() == doctest::Approx(trace.energies.front()).epsilon(1e-4));
}

TEST_CASE("minimize: rejects subcritical exponents and self-crossing input") {
  auto c = unit_circle(64);
  CHECK_THROWS_AS(minimize(c, 1.5), std::invalid_argument);

  Polyline fe;
  fe.closed = true;
  fe.points.resize(2, 512);
  for (int i = 0; i < 512; ++i) {
    const double t = 2 * pi * i / 512;
    fe.points.col(i) << std::cos(t), std::sin(t) * std::cos(t);
  }
  CHECK_THROWS_AS(minimize(resample_arclength(fe, 128), 3.0), std::runtime_error);
}

TEST_CASE("discrete_gradient: near self-contact keeps the cap flag and finite field") {
  // doubly covered circle at even m: coincident node pairs hit the cap
  auto c = resample_arclength(
      generate({ShapeKind::k_circle, {{"radius", 1.0}, {"k", 2.0}, {"samples", 2048.0}}}), 128);
  auto g = discrete_gradient(c, 3.0);
  CHECK(g.capped);
  CHECK(g.field.allFinite());
}

TEST_CASE("pull_tight: energies blow up above the critical exponent") {
  const std::vector<double> gaps{0.2, 0.1, 0.05, 0.025};
  for (double q : {2.5, 3.0}) {
    auto res = pull_tight_experiment(gaps, q, 1200);
    REQUIRE(res.entries.size() == gaps.size());
    for (std::size_t i = 1; i < res.entries.size(); ++i)
      CHECK(res.entries[i].energy > res.entries[i - 1].energy);
    CHECK(res.loglog_slope < 0);  // energy grows as the gap shrinks
  }
}

TEST_CASE("pull_tight: bounded below the critical exponent") {
  const std::vector<double> gaps{0.2, 0.1, 0.05, 0.025};
  auto res = pull_tight_experiment(gaps, 1.5, 1200);
  CHECK(res.entries.back().energy < 1.5 * res.entries.front().energy);
}

TEST_CASE("pull_tight: validation") {
  CHECK_THROWS_AS(pull_tight_experiment(std::vector<double>{0.1, 0.2}, 3.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pull_tight_experiment(std::vector<double>{0.2, 1e-5}, 3.0, 256),
                  std::invalid_argument);
}
