#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "tpcurve/regularity.hpp"
#include "tpcurve/resample.hpp"
#include "tpcurve/shapes.hpp"

using namespace tpc;
using std::numbers::pi;

namespace {

ArcCurve unit_circle(Eigen::Index m) {
  return resample_arclength(
      generate({ShapeKind::circle, {{"radius", 1.0}, {"samples", 4096.0}}}), m);
}

ArcCurve power_curve(double a, Eigen::Index m = 16384) {
  return resample_arclength(
      generate({ShapeKind::power_graph, {{"exponent", a}, {"samples", 8192.0}}}), m);
}

ArcCurve open_segment(Eigen::Index m) {
  Polyline seg;
  seg.closed = false;
  seg.points.resize(2, 2);
  seg.points.col(0) << 0, 0;
  seg.points.col(1) << 1, 0;
  return resample_arclength(seg, m);
}

}  // namespace

TEST_CASE("tangent_oscillation: basics") {
  auto seg = open_segment(64);
  CHECK(tangent_oscillation(seg, 5, 40) == 0.0);
  CHECK(tangent_oscillation(seg, 7, 7) == 0.0);

  auto c = unit_circle(512);
  const double theta = 0.75;
  const Eigen::Index k = Eigen::Index(std::llround(theta / c.spacing()));
  const double osc = tangent_oscillation(c, 0, k);
  CHECK(osc == doctest::Approx(2 * std::sin(k * c.spacing() / 2)).epsilon(1e-3));
}

TEST_CASE("tangent_oscillation: symmetry and triangle inequality") {
  auto c = resample_arclength(
      generate({ShapeKind::perturbed_circle,
                {{"radius", 1.0}, {"amplitude", 0.15}, {"mode", 4.0}, {"samples", 2048.0}}}),
      256);
  for (Eigen::Index u = 0; u < c.size(); u += 37)
    for (Eigen::Index v = 0; v < c.size(); v += 53) {
      CHECK(tangent_oscillation(c, u, v) == tangent_oscillation(c, v, u));
      for (Eigen::Index w = 0; w < c.size(); w += 71)
        CHECK(tangent_oscillation(c, u, w) <=
              tangent_oscillation(c, u, v) + tangent_oscillation(c, v, w) + 1e-12);
    }
}

TEST_CASE("hoelder_fit: circle exponent one") {
  auto c = unit_circle(2048);
  auto fit = hoelder_fit(c, 1e-2, 0.5, 128);
  CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fit.flags.empty());
}

TEST_CASE("hoelder_fit: power graph exponents a-1") {
  for (double a : {1.5, 1.9}) {
    auto c = power_curve(a);
    auto fit = hoelder_fit(c, 1e-3, 2e-2, 128);
    CHECK(fit.exponent == doctest::Approx(a - 1.0).epsilon(0.12));
  }
}

TEST_CASE("hoelder_fit: exponent monotone in a") {
  double prev = 0;
  for (double a : {1.3, 1.5, 1.7, 1.9}) {
    auto fit = hoelder_fit(power_curve(a), 1e-3, 2e-2, 128);
    CHECK(fit.exponent == doctest::Approx(a - 1.0).epsilon(0.34));  // within 0.1 absolute
    CHECK(std::abs(fit.exponent - (a - 1.0)) < 0.1);
    CHECK(fit.exponent > prev);
    prev = fit.exponent;
  }
}

TEST_CASE("hoelder_fit: stadium tangent is Lipschitz") {
  // straight sides contribute no oscillation; the caps give osc ~ gap / r
  auto c = resample_arclength(
      generate({ShapeKind::stadium, {{"radius", 0.8}, {"straight", 1.5}, {"samples", 8192.0}}}),
      2048);
  auto fit = hoelder_fit(c, 2e-2, 0.4, 128);
  CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("hoelder_fit: flat curve flagged") {
  auto fit = hoelder_fit(open_segment(512), 1e-2, 0.2, 128);
  CHECK(fit.exponent == 1.0);
  CHECK(fit.flags.size() == 1);
  CHECK(fit.flags[0] == "flat");
}

TEST_CASE("hoelder_fit: validation") {
  auto c = unit_circle(256);
  CHECK_THROWS_AS(hoelder_fit(c, 1e-9, 0.5, 128), std::invalid_argument);
  CHECK_THROWS_AS(hoelder_fit(c, 1e-2, 0.5, 50), std::invalid_argument);
  CHECK_THROWS_AS(hoelder_fit(c, 1e-2, 10.0, 128), std::invalid_argument);
}

TEST_CASE("verify_main_estimate: straight segment gives zero constant") {
  auto rep = verify_main_estimate(open_segment(512), 3.0, 150);
  CHECK(rep.max_ratio == 0.0);
  CHECK(rep.lambda == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("verify_main_estimate: circle ratio stable across resolutions") {
  auto r256 = verify_main_estimate(unit_circle(256), 3.0, 200);
  auto r512 = verify_main_estimate(unit_circle(512), 3.0, 200);
  CHECK(r256.max_ratio > 0);
  CHECK(std::abs(r256.max_ratio - r512.max_ratio) / r512.max_ratio < 0.10);

  // closed-form circle oracle at the 8-cell gap floor: the window holds 9
  // nodes with 42 included ordered pairs of unit integrand, the oscillation
  // is 2 sin(4h), so the max ratio is 2 sin(4h) / ((42 h^2)^{1/3} (8h)^{1/3})
  {
    auto c = unit_circle(512);
    const double h = c.spacing();
    const double expected =
        2 * std::sin(4 * h) / (std::cbrt(42.0 * h * h) * std::cbrt(8.0 * h));
    CHECK(r512.max_ratio == doctest::Approx(expected).epsilon(0.01));
  }
}

TEST_CASE("verify_main_estimate: dilation invariance") {
  auto c = unit_circle(256);
  ArcCurve scaled = c;
  scaled.nodes *= 2.0;
  scaled.length *= 2.0;
  auto r1 = verify_main_estimate(c, 3.0, 200, 1.0 / 8.0, 7);
  auto r2 = verify_main_estimate(scaled, 3.0, 200, 1.0 / 8.0, 7);
  CHECK(r2.max_ratio == doctest::Approx(r1.max_ratio).epsilon(1e-6));
}

TEST_CASE("verify_main_estimate: near-extremal power graph") {
  const double q = 3.0;
  const double a = 2.0 - 2.0 / q + 0.01;
  auto c = power_curve(a, 8192);
  auto rep = verify_main_estimate(c, q, 300, 1.0 / 8.0, 3);
  // the constant stays finite even just above the extremal exponent
  CHECK(rep.max_ratio > 0);
  CHECK(rep.max_ratio < 1e3);

  // the worst tangent oscillation at a fixed small gap straddles the origin
  const Eigen::Index cells = 8;
  const double osc_origin = tangent_oscillation(c, 0, cells);
  for (Eigen::Index u = cells; u + cells < c.size(); u += 64)
    CHECK(tangent_oscillation(c, u, u + cells) < osc_origin);
}

TEST_CASE("verify_main_estimate: q validation") {
  CHECK_THROWS_AS(verify_main_estimate(unit_circle(256), 2.0, 200), std::invalid_argument);
}
