#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "tpcurve/hausdorff.hpp"
#include "tpcurve/resample.hpp"
#include "tpcurve/shapes.hpp"

using namespace tpc;
using std::numbers::pi;

namespace {

Polyline circle_poly(double radius, int samples) {
  return generate({ShapeKind::circle, {{"radius", radius}, {"samples", double(samples)}}});
}

}  // namespace

TEST_CASE("generate: circle length converges to circumference") {
  auto p = circle_poly(1.0, 256);
  CHECK(p.closed);
  CHECK(p.size() == 256);
  CHECK(p.polygonal_length() == doctest::Approx(2 * pi).epsilon(1e-3));
}

TEST_CASE("generate: k-circle traverses the circle k times") {
  auto p = generate({ShapeKind::k_circle, {{"radius", 1.0}, {"k", 3.0}, {"samples", 768.0}}});
  CHECK(p.polygonal_length() == doctest::Approx(6 * pi).epsilon(1e-3));
}

TEST_CASE("generate: power graph is open with fixed endpoints") {
  auto p = generate({ShapeKind::power_graph, {{"exponent", 1.5}, {"samples", 512.0}}});
  CHECK_FALSE(p.closed);
  CHECK(p.points(0, 0) == 0.0);
  CHECK(p.points(1, 0) == 0.0);
  CHECK(p.points(0, 511) == doctest::Approx(1.0));
  CHECK(p.points(1, 511) == doctest::Approx(1.0));
}

TEST_CASE("generate: parameter validation names the parameter") {
  CHECK_THROWS_WITH_AS(generate({ShapeKind::power_graph, {{"exponent", 2.5}}}),
                       doctest::Contains("exponent"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      generate({ShapeKind::torus_knot, {{"p", 2.0}, {"q", 4.0}}}),
      doctest::Contains("coprime"), std::invalid_argument);
  CHECK_THROWS_AS(generate({ShapeKind::perturbed_circle, {{"amplitude", 1.5}}}),
                  std::invalid_argument);
}

TEST_CASE("resample: circle keeps length, uniform gaps") {
  auto c = resample_arclength(circle_poly(1.0, 2048), 128);
  CHECK(c.length == doctest::Approx(2 * pi).epsilon(1e-4));
  c.validate();
  // chord gaps are equal for a circle
  double g0 = (c.nodes.col(1) - c.nodes.col(0)).norm();
  for (Eigen::Index i = 1; i < c.size(); ++i) {
    double g = (c.nodes.col((i + 1) % c.size()) - c.nodes.col(i)).norm();
    CHECK(g == doctest::Approx(g0).epsilon(1e-9));
  }
}

TEST_CASE("resample: open segment nodes at exact spacing") {
  Polyline seg;
  seg.closed = false;
  seg.points.resize(2, 2);
  seg.points.col(0) << 0, 0;
  seg.points.col(1) << 1, 0;
  auto c = resample_arclength(seg, 11);
  CHECK(c.length == doctest::Approx(1.0));
  for (Eigen::Index i = 0; i < 11; ++i)
    CHECK(c.nodes(0, i) == doctest::Approx(0.1 * double(i)).epsilon(1e-12));
}

TEST_CASE("resample: node count below minimum rejected") {
  CHECK_THROWS_AS(resample_arclength(circle_poly(1.0, 64), 4), std::invalid_argument);
}

TEST_CASE("resample: degenerate polyline rejected") {
  Polyline bad;
  bad.closed = false;
  bad.points.resize(2, 2);
  bad.points.col(0) << 0, 0;
  bad.points.col(1) << 0, 0;
  CHECK_THROWS(resample_arclength(bad, 16));
}

TEST_CASE("tangent: perpendicular to the radius on a circle") {
  auto c = resample_arclength(circle_poly(1.0, 4096), 512);
  for (Eigen::Index i = 0; i < c.size(); i += 37) {
    const double radial = std::abs(c.tangents.col(i).dot(c.nodes.col(i).normalized()));
    CHECK(radial < 1e-3);
  }
}

TEST_CASE("tangent: straight segment direction is exact") {
  Polyline seg;
  seg.closed = false;
  seg.points.resize(3, 2);
  seg.points.col(0) << 0, 0, 0;
  seg.points.col(1) << 2, 0, 0;
  auto c = resample_arclength(seg, 16);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    CHECK(c.tangents(0, i) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(c.tangents(1, i)) < 1e-14);
  }
}

TEST_CASE("tangent: square corner gets the bisector direction") {
  // 16 nodes on the unit-perimeter... square of side 1: corners land on nodes
  Polyline sq = generate(
      {ShapeKind::regular_polygon, {{"vertices", 4.0}, {"radius", std::sqrt(0.5)}, {"samples", 16.0}}});
  auto c = resample_arclength(sq, 16);
  // node 0 sits on the corner at angle 0 of the circumscribed circle
  const Eigen::Vector2d corner(std::sqrt(0.5), 0.0);
  CHECK((c.nodes.col(0) - corner).norm() < 1e-12);
  // central difference across the right-angle corner bisects it: direction
  // is the normalized sum of the two edge directions, here (0, 1)
  CHECK(std::abs(c.tangents(0, 0)) < 1e-12);
  CHECK(c.tangents(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tangent: doubling back at grid scale is an error") {
  ArcCurve c;
  c.closed = false;
  c.length = 2.0;
  c.nodes.resize(2, 3);
  c.nodes.col(0) << 0, 0;
  c.nodes.col(1) << 1, 0;
  c.nodes.col(2) << 0, 0;  // folds back exactly
  c.tangents.resize(2, 3);
  CHECK_THROWS_AS(tangent_estimate(c, 1), std::runtime_error);
}

TEST_CASE("hausdorff: identical, concentric, translated") {
  auto a = circle_poly(1.0, 2048);
  CHECK(hausdorff_distance(a, a) == doctest::Approx(0.0).epsilon(1e-12));

  auto b = circle_poly(1.1, 2048);
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.1).epsilon(1e-3));

  Polyline s1, s2;
  s1.closed = s2.closed = false;
  s1.points.resize(3, 2);
  s1.points.col(0) << 0, 0, 0;
  s1.points.col(1) << 1, 0, 0;
  s2.points.resize(3, 2);
  s2.points.col(0) << 0, 0.5, 0;
  s2.points.col(1) << 1, 0.5, 0;
  CHECK(hausdorff_distance(s1, s2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hausdorff: symmetry and triangle inequality on generated curves") {
  std::vector<Polyline> curves;
  curves.push_back(circle_poly(1.0, 256));
  curves.push_back(generate({ShapeKind::perturbed_circle,
                             {{"radius", 1.0}, {"amplitude", 0.2}, {"mode", 5.0}, {"samples", 256.0}}}));
  curves.push_back(generate({ShapeKind::stadium, {{"radius", 0.7}, {"straight", 1.3}, {"samples", 256.0}}}));
  curves.push_back(generate(
      {ShapeKind::regular_polygon, {{"vertices", 5.0}, {"radius", 1.2}, {"samples", 255.0}}}));

  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = 0; j < curves.size(); ++j) {
      const double dij = hausdorff_distance(curves[i], curves[j]);
      const double dji = hausdorff_distance(curves[j], curves[i]);
      CHECK(dij == doctest::Approx(dji).epsilon(1e-9));
      for (std::size_t k = 0; k < curves.size(); ++k) {
        const double dik = hausdorff_distance(curves[i], curves[k]);
        const double dkj = hausdorff_distance(curves[k], curves[j]);
        CHECK(dij <= dik + dkj + 1e-9);
      }
    }
}

TEST_CASE("invariant: resampling is idempotent") {
  for (bool open_case : {false, true}) {
    // the open case needs resolution near the power-graph origin, where the
    // curvature (and so the chord-vs-arc drift) concentrates
    const Eigen::Index m = open_case ? 1024 : 128;
    Polyline p = open_case
                     ? generate({ShapeKind::power_graph, {{"exponent", 1.5}, {"samples", 4096.0}}})
                     : circle_poly(1.0, 1024);
    auto c1 = resample_arclength(p, m);
    auto c2 = resample_arclength(c1.as_polyline(), m);
    CHECK((c1.nodes - c2.nodes).cwiseAbs().maxCoeff() < 1e-6 * c1.length);
  }
}

TEST_CASE("invariant: resampled circle nodes stay on the circle") {
  auto c = resample_arclength(circle_poly(1.0, 4096), 256);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    CHECK(std::abs(c.nodes.col(i).norm() - 1.0) < 1e-6);
}

TEST_CASE("polyline validation") {
  Polyline p;
  p.closed = true;
  p.points.resize(2, 2);
  p.points.col(0) << 0, 0;
  p.points.col(1) << 1, 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // closed needs >= 3

  p.closed = false;
  CHECK_NOTHROW(p.validate());

  Polyline dup;
  dup.closed = false;
  dup.points.resize(2, 3);
  dup.points.col(0) << 0, 0;
  dup.points.col(1) << 0, 0;
  dup.points.col(2) << 1, 0;
  CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
}
