#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "tpcurve/beta.hpp"
#include "tpcurve/resample.hpp"
#include "tpcurve/shapes.hpp"

using namespace tpc;
using std::numbers::pi;

namespace {

ArcCurve unit_circle(Eigen::Index m, int samples = 4096) {
  return resample_arclength(
      generate({ShapeKind::circle, {{"radius", 1.0}, {"samples", double(samples)}}}), m);
}

ArcCurve open_segment(double len, Eigen::Index m) {
  Polyline seg;
  seg.closed = false;
  seg.points.resize(2, 2);
  seg.points.col(0) << 0, 0;
  seg.points.col(1) << len, 0;
  return resample_arclength(seg, m);
}

}  // namespace

TEST_CASE("beta_number: straight segment is flat") {
  auto c = open_segment(1.0, 64);
  CHECK(beta_number(c, 32, 0.2).value < 1e-9);
}

TEST_CASE("beta_number: circle matches the brute-force direction sweep") {
  auto c = unit_circle(512);
  for (double d : {0.5, 0.2, 0.1}) {
    for (Eigen::Index i : {Eigen::Index(0), Eigen::Index(100), Eigen::Index(333)}) {
      const double mine = beta_number(c, i, d).value;
      const double oracle = oracles::beta_brute_force(c, i, d);
      CHECK(mine == doctest::Approx(oracle).epsilon(1e-3));
      CHECK(mine <= oracle + 1e-9);  // the infimum never exceeds a candidate line
    }
  }
}

TEST_CASE("beta_number: circle decay slope is one") {
  auto c = unit_circle(1024);
  std::vector<double> lx, ly;
  for (double d = 0.5; d >= 0.05; d /= 1.5) {
    lx.push_back(std::log(d));
    ly.push_back(std::log(beta_number(c, 0, d).value));
  }
  const double slope = tpc::detail::linear_fit(lx, ly).first;
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("beta_number: empty ball flagged") {
  auto c = unit_circle(64);
  auto b = beta_number(c, 0, 1e-6);
  CHECK(b.value == 0.0);
  CHECK(b.empty_ball);
}

TEST_CASE("beta_number: value always within [0, 1]") {
  auto spiky = resample_arclength(
      generate({ShapeKind::perturbed_circle,
                {{"radius", 1.0}, {"amplitude", 0.4}, {"mode", 7.0}, {"samples", 2048.0}}}),
      256);
  for (double d : {1.9, 1.0, 0.3, 0.05})
    for (Eigen::Index i = 0; i < spiky.size(); i += 41) {
      const double v = beta_number(spiky, i, d).value;
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
}

TEST_CASE("beta_profile: circle passes the kappa test at q=4") {
  auto c = unit_circle(512);
  auto prof = beta_profile(c, 4.0, std::vector<double>{0.5, 0.35, 0.25, 0.17, 0.12, 0.08, 0.05});
  CHECK(prof.kappa == doctest::Approx(0.25));  // (4-2)/(4+4)
  CHECK(prof.fitted_exponent == doctest::Approx(1.0).epsilon(0.1));
  CHECK(prof.pass);
  for (double b : prof.sup_beta) {
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
  }
  CHECK_THROWS_AS(beta_profile(c, 4.0, std::vector<double>{0.5, 0.25}), std::invalid_argument);
}

TEST_CASE("beta_number: power graph near the origin decays like a-1") {
  auto p = generate({ShapeKind::power_graph, {{"exponent", 1.8}, {"samples", 8192.0}}});
  auto c = resample_arclength(p, 16384);
  // node 0 is the origin
  std::vector<double> lx, ly;
  for (double d = 0.1; d >= 2e-3; d /= 2) {
    const double b = beta_number(c, 0, d).value;
    if (b > 0) {
      lx.push_back(std::log(d));
      ly.push_back(std::log(b));
    }
  }
  REQUIRE(lx.size() >= 4);
  const double slope = tpc::detail::linear_fit(lx, ly).first;
  CHECK(slope == doctest::Approx(0.8).epsilon(0.15));
}

TEST_CASE("omega_e: circle closed form") {
  auto c = unit_circle(2048);
  const double v = omega_e_estimate(c, 1.0, 2.0);
  CHECK(v == doctest::Approx(std::pow(1e-4, 1.0 / 6.0)).epsilon(0.05));
}

TEST_CASE("omega_e: nondecreasing in the scale") {
  auto c = unit_circle(1024);
  double prev = 0;
  for (double d : {0.4, 0.8, 1.2, 1.6}) {
    const double v = omega_e_estimate(c, d, 2.0);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("omega_e: straight segment vanishes, window validation") {
  auto c = open_segment(1.0, 256);
  CHECK(omega_e_estimate(c, 0.9, 2.0) == 0.0);
  CHECK_THROWS_AS(omega_e_estimate(c, 1e-4, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(omega_e_estimate(c, 0.9, 1.5), std::invalid_argument);
}

TEST_CASE("cone containment: circle pair at moderate angle fits phi=0.2") {
  auto c = unit_circle(512);
  // s at node 0, t at the node closest to chord distance 0.1
  const double h = c.spacing();
  const double alpha = 2 * std::asin(0.05);
  const double t = std::round(alpha / h) * h;
  auto res = cone_containment_check(c, 0.0, t, 0.2);
  CHECK(res.contained);

  // exact circle-arc oracle: every in-ball node angle against both chords
  {
    const Vec<double> x = c.eval(0.0), y = c.eval(t);
    const double d = (x - y).norm();
    double worst = 0;
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      const auto z = c.nodes.col(j);
      if ((z - x).norm() > 2 * d || (z - y).norm() > 2 * d) continue;
      auto ang = [](const Eigen::Vector2d& v, const Eigen::Vector2d& a) {
        if (v.norm() == 0) return 0.0;
        return std::acos(std::min(1.0, std::abs(v.dot(a)) / (v.norm() * a.norm())));
      };
      const Eigen::Vector2d axis(y(0) - x(0), y(1) - x(1));
      worst = std::max(worst, ang(Eigen::Vector2d(z(0) - x(0), z(1) - x(1)), axis));
      worst = std::max(worst, ang(Eigen::Vector2d(z(0) - y(0), z(1) - y(1)), axis));
    }
    CHECK((worst <= 0.1) == res.contained);
    CHECK(res.worst_excess == doctest::Approx(worst - 0.1).epsilon(1e-6));
  }

  auto tight = cone_containment_check(c, 0.0, t, 0.001);
  CHECK_FALSE(tight.contained);
  CHECK(tight.worst_excess > 0);
}

TEST_CASE("cone containment: straight segment always contained") {
  auto c = open_segment(1.0, 128);
  for (double phi : {0.3, 0.05})
    CHECK(cone_containment_check(c, 0.2, 0.6, phi).contained);
  CHECK_THROWS_AS(cone_containment_check(c, 0.2, 0.6, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(cone_containment_check(c, 0.2, 0.2, 0.3), std::invalid_argument);
}

TEST_CASE("bilipschitz: chord never exceeds arc") {
  for (const auto& spec : std::vector<ShapeSpec>{
           {ShapeKind::circle, {{"radius", 1.0}, {"samples", 1024.0}}},
           {ShapeKind::perturbed_circle,
            {{"radius", 1.0}, {"amplitude", 0.1}, {"mode", 3.0}, {"samples", 1024.0}}},
           {ShapeKind::stadium, {{"radius", 0.5}, {"straight", 1.0}, {"samples", 1024.0}}}}) {
    auto c = resample_arclength(generate(spec), 256);
    auto rep = bilipschitz_report(c, c.length / 2);
    CHECK(rep.max_ratio <= 1.0 + 1e-9);
  }
}

TEST_CASE("bilipschitz: circle chord/arc at d_max = 1") {
  auto c = unit_circle(512);
  auto rep = bilipschitz_report(c, 1.0);
  CHECK(rep.min_ratio == doctest::Approx(std::sin(0.5) / 0.5).epsilon(1e-3));
}

TEST_CASE("bilipschitz: paper regime ratio stays above 3/4") {
  auto c = unit_circle(512);
  auto rep = bilipschitz_report(c, 2.0);
  CHECK(rep.min_ratio >= 0.75);
}

TEST_CASE("secant slab: circle inclusion frontier at q=3") {
  auto c = unit_circle(512);
  const double E = energy(c, 3.0, 2).value;

  // minimal passing c0 over a sample of chord pairs
  double c0 = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs{{0, 40}, {100, 160}, {200, 300}};
  for (auto [i, j] : pairs) {
    auto rep = secant_slab_report(c, i, j, 3.0, E);
    CHECK(rep.max_dist <= 2 * rep.d);  // distances inside B(x, 2d)
    c0 = std::max(c0, rep.c0_min);
  }
  CHECK(c0 > 0);

  // with c0 doubled, the implied epsilon passes the inclusion for every pair
  for (auto [i, j] : pairs) {
    auto rep = secant_slab_report(c, i, j, 3.0, E);
    const double eps = std::pow(2 * c0 * E * std::pow(rep.d, 1.0), 1.0 / 7.0);
    CHECK(rep.max_dist <= 20 * eps * rep.d);
  }
}
