#include <doctest.h>

#include "constants.hpp"
#include "errors.hpp"
#include "harnack.hpp"
#include "model.hpp"

#include <cmath>
#include <numbers>

using namespace hl;

namespace {

double brownian3_poisson(double R, const Point &x, const Point &z) {
  const double r = x.norm(), dz = distance(x, z);
  return (R * R - r * r) / (4.0 * std::numbers::pi * R * dz * dz * dz);
}

HarnackConstants reference_constants(const ProcessModel &m) {
  return build_constants(m.scale(), 3.0, 16.0, kInfinity);
}

} // namespace

TEST_SUITE("harnack") {

TEST_CASE("constant data is reproduced inside the ball") {
  const ProcessModel m = ProcessModel::stable(3, 1.0);
  const HarmonicFunction h = HarmonicFunction::constant(m, Ball(Point(3), 1.0), 2.5);
  CHECK(h.evaluate(Point{0.3, 0.1, 0.0}) == 2.5);
  CHECK(h.boundary_value(Point{2.0, 0.0, 0.0}) == 2.5);
  CHECK_THROWS_AS(HarmonicFunction::constant(m, Ball(Point(3), 1.0), -1.0), ConfigError);
}

TEST_CASE("full cells carry unit exit mass") {
  for (const ProcessModel &m : {ProcessModel::stable(1, 1.0), ProcessModel::stable(2, 1.5),
                                ProcessModel::stable(3, 1.0), ProcessModel::brownian(3)}) {
    const int d = m.dim();
    const Ball ball(Point(d), 1.0);
    BoundaryCell all;
    all.rho_lo = 0.5;
    const HarmonicFunction h = HarmonicFunction::cells(m, ball, {all});
    Point x(d);
    x[0] = 0.4;
    CHECK(h.evaluate(x) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("Brownian hemisphere is one half at the centre") {
  const ProcessModel m = ProcessModel::brownian(3);
  BoundaryCell half;
  half.half_angle = std::numbers::pi / 2;
  half.rho_lo = 0.0;
  const HarmonicFunction h = HarmonicFunction::cells(m, Ball(Point(3), 1.0), {half});
  CHECK(h.evaluate(Point(3)) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(h.evaluate(Point{0.5, 0.0, 0.0}) > 0.5);
  CHECK(h.evaluate(Point{-0.5, 0.0, 0.0}) < 0.5);
}

TEST_CASE("Brownian poles match the explicit Poisson kernel") {
  const ProcessModel m = ProcessModel::brownian(3);
  const Point z{0.0, 0.6, 0.8};
  const HarmonicFunction h = HarmonicFunction::pole(m, Ball(Point(3), 1.0), z);
  for (const Point &x : {Point{0.0, 0.0, 0.0}, Point{0.3, 0.2, -0.1}, Point{0.0, 0.5, 0.6}})
    CHECK(h.evaluate(x) == doctest::Approx(brownian3_poisson(1.0, x, z)).epsilon(1e-10));
  CHECK_THROWS_AS(HarmonicFunction::pole(m, Ball(Point(3), 1.0), Point{2.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(HarmonicFunction::pole(ProcessModel::stable(3, 1.0), Ball(Point(3), 1.0),
                                         Point{0.5, 0.0, 0.0}),
                  DomainError);
}

TEST_CASE("pole mean-value property") {
  const ProcessModel m = ProcessModel::stable(3, 1.0);
  const HarmonicFunction h = HarmonicFunction::pole(m, Ball(Point(3), 1.0), Point{1.5, 0.0, 0.0});
  const MeanValueResult r = mean_value_check(h, Ball(Point(3), 0.5), Point{0.1, 0.0, 0.0}, 20000, 11);
  CHECK(r.jump_term > 0.0);
  CHECK(std::abs(r.residual) <= 4.0);
  CHECK_THROWS_AS(mean_value_check(h, Ball(Point(3), 1.0), Point(3), 10, 1), DomainError);
}

TEST_CASE("pole family geometry") {
  const ProcessModel m = ProcessModel::stable(2, 1.0);
  const Ball ball(Point{1.0, -1.0}, 2.0);
  const auto family = pole_family(m, ball, 50);
  CHECK(family.size() == 50);
  for (const HarmonicFunction &h : family) {
    const double s = distance(h.pole_point(), ball.center) / ball.radius - 1.0;
    CHECK(s >= 1e-3 * (1 - 1e-12));
    CHECK(s <= 1e2 * (1 + 1e-12));
  }
}

TEST_CASE("Harnack ratio is dilation invariant") {
  const ProcessModel m = ProcessModel::stable(1, 1.0);
  const HarnackConstants k = reference_constants(ProcessModel::stable(3, 1.0));
  double ratios[2];
  int i = 0;
  for (double R : {1.0, 10.0}) {
    const auto family = pole_family(m, Ball(Point{0.0}, kNeighbourhoodMargin * R), 40);
    const HarnackRatioResult res = harnack_ratio(Point{0.0}, R, k, family, 256);
    CHECK(res.pass);
    CHECK(res.excluded == 0);
    CHECK(res.inner_radius == doctest::Approx(k.alpha * k.alpha * R));
    ratios[i++] = res.max_ratio;
  }
  CHECK(ratios[0] == doctest::Approx(ratios[1]).epsilon(1e-9));
  CHECK(ratios[0] >= 1.0);
}

TEST_CASE("Harnack ratio does not depend on the thread count") {
  const ProcessModel m = ProcessModel::stable(2, 1.0);
  const HarnackConstants k = reference_constants(ProcessModel::stable(3, 1.0));
  const auto family = pole_family(m, Ball(Point(2), kNeighbourhoodMargin), 20);
  const HarnackRatioResult a = harnack_ratio(Point(2), 1.0, k, family, 128, 1);
  const HarnackRatioResult b = harnack_ratio(Point(2), 1.0, k, family, 128, 3);
  CHECK(a.max_ratio == b.max_ratio);
  CHECK(a.argmax == b.argmax);
}

TEST_CASE("Harnack ratio rejects members harmonic on too small a ball") {
  const ProcessModel m = ProcessModel::stable(1, 1.0);
  const HarnackConstants k = reference_constants(ProcessModel::stable(3, 1.0));
  const auto family = pole_family(m, Ball(Point{0.0}, 1.0), 4);
  CHECK_THROWS_AS(harnack_ratio(Point{0.0}, 1.0, k, family, 16), DomainError);
  CHECK_THROWS_AS(harnack_ratio(Point{0.0}, 1.0, k, {}, 16), ConfigError);
}

TEST_CASE("diffusion check against the Newtonian kernel") {
  const ProcessModel m = ProcessModel::brownian(3);
  const DiffusionCheck c = diffusion_global_check(m, Point(3), 1.0, Point{3.0, 0.0, 0.0}, 512);
  // |x - z| ranges over [2.5, 3.5] on B(0, 1/2).
  CHECK(c.ratio <= 3.5 / 2.5 * (1 + 1e-12));
  CHECK(c.ratio > 1.2);
  CHECK(c.pass);
  CHECK_THROWS_AS(diffusion_global_check(m, Point(3), 1.0, Point{1.5, 0.0, 0.0}), DomainError);
}

TEST_CASE("empirical Harnack constant") {
  const ProcessModel m = ProcessModel::stable(3, 1.0);
  const HarnackConstants k = reference_constants(m);
  const EmpiricalHarnack e = empirical_harnack_constant(m, Point(3), 1.0, k, 20, 0.5, 128);
  CHECK(e.constant > 1.0);
  CHECK(std::isfinite(e.constant));
  CHECK_THROWS_AS(empirical_harnack_constant(ProcessModel::brownian(3), Point(3), 1.0, k, 4), DomainError);
}

} // TEST_SUITE
