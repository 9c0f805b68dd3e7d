#include <doctest.h>

#include "errors.hpp"
#include "point.hpp"
#include "quadrature.hpp"
#include "scale.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace hl;

TEST_SUITE("scale") {

TEST_CASE("power law has the sharp doubling and decay constants") {
  for (double p : {0.5, 1.0, 2.0, 3.5}) {
    const GreenScale g = power_law_scale(2.0, p);
    CHECK(g.cD == std::exp2(p));
    CHECK(g.eta0 == std::exp2(-p));
    CHECK(g.alpha0 == 0.5);
    const auto rep = verify_scale(g, default_grid(g));
    CHECK(rep.valid());
    CHECK(rep.grid_size == 256);
    CHECK(measured_doubling_constant(g, default_grid(g)) == doctest::Approx(std::exp2(p)).epsilon(1e-12));
  }
}

TEST_CASE("verify_scale reports each broken invariant") {
  GreenScale g = power_law_scale(1.0, 2.0);
  g.cD = 3.0; // true doubling constant is 4
  auto rep = verify_scale(g, log_grid(1e-3, 1.0, 16));
  CHECK(rep.count(ScaleInvariant::Doubling) == 16);
  CHECK(rep.count(ScaleInvariant::Decay) == 0);

  GreenScale flat = power_law_scale(1.0, 1.0);
  flat.evaluator = [](double r) { return r < 1e-2 ? 5.0 : 1.0 / r; };
  rep = verify_scale(flat, log_grid(1e-3, 1.0, 32));
  CHECK(rep.count(ScaleInvariant::SingularAtZero) > 0);

  GreenScale bump = power_law_scale(1.0, 1.0);
  bump.evaluator = [](double r) { return std::abs(r - 0.5) < 0.01 ? 10.0 : 1.0 / r; };
  rep = verify_scale(bump, log_grid(0.1, 1.0, 200));
  CHECK(rep.count(ScaleInvariant::Decreasing) > 0);
}

TEST_CASE("log_grid endpoints and spacing") {
  const auto g = log_grid(1e-4, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == doctest::Approx(1e-4));
  CHECK(g[2] == doctest::Approx(1e-2));
  CHECK(g.back() == doctest::Approx(1.0));
}

TEST_CASE("invert recovers the radius") {
  const GreenScale g = power_law_scale(0.3, 2.0);
  for (double r : {1e-6, 1e-3, 0.5, 7.0, 1e4}) {
    const double back = invert(g, g(r));
    CHECK(back == doctest::Approx(r).epsilon(1e-11));
  }
  CHECK_THROWS_AS(invert(g, -1.0), Error);
}

TEST_CASE("tabulated scale interpolates log-log and measures its constants") {
  std::istringstream in("# r g\n0.01 10000\n0.1 100  # slope -2\n1 10\n");
  const GreenScale g = parse_scale_table(in, "table");
  CHECK(g(0.01) == doctest::Approx(10000));
  CHECK(g(std::sqrt(0.1)) == doctest::Approx(std::sqrt(1000.0)));
  CHECK(g(0.001) == doctest::Approx(1e6)); // first segment extended
  CHECK(g.R0 == 1.0);
  CHECK(g.cD == doctest::Approx(4.0));
  CHECK(g.eta0 == doctest::Approx(0.5));
  CHECK(verify_scale(g, default_grid(g)).valid());
}

TEST_CASE("scale table errors carry line numbers") {
  auto parse = [](const char *text) {
    std::istringstream in(text);
    return parse_scale_table(in, "t.txt");
  };
  CHECK_THROWS_WITH_AS(parse("0.1 1\n0.05 0.5\n"), doctest::Contains("t.txt:2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("0.1 1\n0.2 2\n"), doctest::Contains("t.txt:2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("0.1 1\n\nabc\n"), doctest::Contains("t.txt:3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("0.1 1 3\n"), doctest::Contains("t.txt:1"), ConfigError);
  CHECK_THROWS_AS(parse("0.1 1\n"), ConfigError);
  CHECK_THROWS_AS(load_scale_file("/nonexistent/scale.txt"), ConfigError);
}

TEST_CASE("regularize agrees on dyadic nodes") {
  GreenScale g = power_law_scale(1.0, 1.5);
  const GreenScale reg = regularize(g);
  for (int n = -5; n <= 5; ++n) {
    const double r = std::ldexp(1.0, n);
    CHECK(reg(r) == doctest::Approx(g(r)).epsilon(1e-12));
  }
  CHECK(verify_scale(reg, log_grid(1e-3, 1e3, 64)).count(ScaleInvariant::Decreasing) == 0);
}

TEST_CASE("decay_alpha picks the smallest admissible power") {
  const GreenScale g = power_law_scale(1.0, 2.0); // eta0 = 1/4
  const DecayChoice c = decay_alpha(g, 1.0 / 32);
  CHECK(c.m == 3);
  CHECK(c.alpha == 0.125);
}

} // TEST_SUITE

TEST_SUITE("quadrature") {

TEST_CASE("finite interval") {
  const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12, "sin");
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("exterior radial integral with edge and tail singularities") {
  // int_1^inf (rho - 1)^(-1/2) rho^(-3/2) d rho = B(1/2, 1) = 2.
  const auto r = quad::integrate_exterior_radial(
      [](double p) { return std::pow(p - 1.0, -0.5) * std::pow(p, -1.5); }, 1.0, 1.0, kInfinity, 1.0,
      1e-10, "beta");
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("sphere areas and caps") {
  CHECK(quad::unit_sphere_area(1) == doctest::Approx(2.0));
  CHECK(quad::unit_sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(quad::unit_sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
  CHECK(quad::unit_ball_volume(3) == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
  auto one = [](const Point &) { return 1.0; };
  // Cap of half-angle t in S^2 has area 2 pi (1 - cos t).
  const double t = 0.7;
  CHECK(quad::integrate_cap(3, one, unit_vector(3, 2), t, 1e-10, "cap").value ==
        doctest::Approx(2 * std::numbers::pi * (1 - std::cos(t))).epsilon(1e-9));
  CHECK(quad::integrate_cap(2, one, unit_vector(2, 0), t, 1e-10, "arc").value ==
        doctest::Approx(2 * t).epsilon(1e-10));
  CHECK(quad::integrate_cap(1, one, Point{1.0}, 0.5 * std::numbers::pi, 1e-10, "pt").value ==
        doctest::Approx(1.0));
  CHECK(quad::integrate_cap(1, one, Point{1.0}, std::numbers::pi, 1e-10, "pts").value ==
        doctest::Approx(2.0));
}

} // TEST_SUITE
