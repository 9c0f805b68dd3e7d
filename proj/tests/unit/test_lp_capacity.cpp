#include <doctest.h>

#include "../common/oracles.hpp"

#include "capacity.hpp"
#include "errors.hpp"
#include "lp.hpp"
#include "model.hpp"

#include <cmath>
#include <numbers>

using namespace hl;

TEST_SUITE("lp") {

TEST_CASE("square system uses the LU certificate") {
  Eigen::MatrixXd K(2, 2);
  K << 1.0, 0.5, 0.5, 1.0;
  const PackingSolution s = solve_packing_lp(K);
  CHECK(s.objective == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(s.primal(0) == doctest::Approx(2.0 / 3.0));
  CHECK(s.duality_gap < 1e-12);
  CHECK(s.method == "lu");
}

TEST_CASE("simplex on a rectangular problem with a known optimum") {
  // max x + y  s.t.  x + 2y <= 1, 3x + y <= 1, x + y <= 1 (slack at the optimum)
  Eigen::MatrixXd K(3, 2);
  K << 1, 2, 3, 1, 1, 1;
  const PackingSolution s = solve_packing_lp(K);
  CHECK(s.objective == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(s.primal(0) == doctest::Approx(0.2));
  CHECK(s.primal(1) == doctest::Approx(0.4));
  CHECK(s.duality_gap < kLpGapTolerance);
  const Eigen::VectorXd slack = Eigen::VectorXd::Ones(3) - K * s.primal;
  CHECK(slack.minCoeff() > -1e-12);
  CHECK((K.transpose() * s.dual).minCoeff() > 1 - 1e-9);
}

TEST_CASE("random dense problems certify strong duality") {
  std::srand(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd K = (Eigen::MatrixXd::Random(30, 20).array() + 1.1).matrix();
    const PackingSolution s = solve_packing_lp(K);
    CHECK(s.duality_gap < kLpGapTolerance);
    CHECK(s.primal.minCoeff() >= 0.0);
    CHECK((K * s.primal).maxCoeff() <= 1.0 + 1e-9);
  }
}

TEST_CASE("infinite entries pin a variable to zero; empty columns are unbounded") {
  Eigen::MatrixXd K(2, 2);
  K << std::numeric_limits<double>::infinity(), 1.0, 1.0, 2.0;
  const PackingSolution s = solve_packing_lp(K);
  CHECK(s.primal(0) == 0.0);
  CHECK(s.objective == doctest::Approx(0.5));
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(2, 2);
  Z(0, 0) = 1.0;
  CHECK_THROWS_AS(solve_packing_lp(Z), NumericalError);
}

} // TEST_SUITE

TEST_SUITE("capacity") {

TEST_CASE("LP capacity converges to the exact Riesz capacity from above") {
  const ProcessModel m = ProcessModel::stable(2, 1.0);
  const Ball ball(Point(2), 1.0);
  const double exact = oracle::ball_capacity(2, 1.0, 1.0);
  CHECK(exact == doctest::Approx(4.0).epsilon(1e-12));
  double previous = kInfinity;
  for (int n : {64, 256, 1024}) {
    const CapacityResult r = ball_capacity(m, ball, n);
    CHECK(r.capacity > exact);
    CHECK(r.capacity < previous);
    CHECK(r.duality_gap < kLpGapTolerance);
    previous = r.capacity;
  }
  CHECK(previous == doctest::Approx(exact).epsilon(0.03));
}

TEST_CASE("d = 3, alpha = 1 against pi^2 r") {
  const ProcessModel m = ProcessModel::stable(3, 1.0);
  const double exact = oracle::ball_capacity(3, 1.0, 1.0);
  CHECK(exact == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-12));
  const CapacityResult r = ball_capacity(m, Ball(Point(3), 1.0), 512);
  CHECK(r.capacity == doctest::Approx(exact).epsilon(0.1));
  CHECK(r.capacity > exact);
  CHECK(r.slack > 0.0);
  CHECK(r.coarse_capacity > r.capacity);
  // The measure is a feasible packing: its potential is at most 1 on the cloud.
  CHECK(r.constraint_residual < 1e-9);
  CHECK(r.measure.total_mass() == doctest::Approx(r.capacity).epsilon(1e-12));
}

TEST_CASE("capacity scales like r^(d - alpha) and is translation invariant") {
  const ProcessModel m = ProcessModel::stable(3, 1.5);
  const double c1 = ball_capacity(m, Ball(Point(3), 1.0), 128).capacity;
  const double c2 = ball_capacity(m, Ball(Point(3), 2.0), 128).capacity;
  const double c3 = ball_capacity(m, Ball(Point{5.0, -1.0, 2.0}, 1.0), 128).capacity;
  CHECK(c2 / c1 == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-10));
  CHECK(c3 == doctest::Approx(c1).epsilon(1e-10));
}

TEST_CASE("two-sided bounds contain the exact capacity") {
  for (auto [d, a] : {std::pair{2, 1.0}, {3, 1.0}, {3, 1.5}, {4, 1.0}}) {
    const ProcessModel m = ProcessModel::stable(d, a);
    const GreenScale &g = m.scale();
    const double C_G = compute_CG(g, d, default_grid(g));
    CHECK(C_G == doctest::Approx(d / a).epsilon(1e-8)); // d / (d - p), p = d - alpha
    const double c0 = c0_from_CG(m, C_G);
    for (double r : {0.5, 1.0, 3.0}) {
      const CapacityBounds b = capacity_bounds(g, r, c0);
      const double exact = oracle::ball_capacity(d, a, r);
      CHECK(b.lower <= exact);
      CHECK(exact <= b.upper);
    }
  }
}

TEST_CASE("literal LP with separate support and test clouds") {
  const ProcessModel m = ProcessModel::stable(3, 1.0);
  const Ball ball(Point(3), 1.0);
  const auto support = ball_cloud(ball, 64);
  const auto test = jittered(support, 0.5 * cloud_spacing(ball, 64));
  const CapacityResult r = capacity_lp(m, support, test);
  CHECK(r.capacity > 0.0);
  CHECK(r.duality_gap < kLpGapTolerance);
  for (const Point &x : test)
    CHECK(equilibrium_potential(m, r, x) <= 1.0 + 1e-9);
  // Coinciding support and test points force zero weights.
  CHECK(capacity_lp(m, support, support).capacity == 0.0);
}

TEST_CASE("ball cloud fills the ball") {
  for (int d : {1, 2, 3, 4}) {
    const Ball ball(Point(d), 2.0);
    const auto cloud = ball_cloud(ball, 100);
    CHECK(cloud.size() == 100);
    for (const Point &p : cloud)
      CHECK(ball.contains(p));
  }
  CHECK_THROWS_AS(ball_capacity(ProcessModel::stable(3, 1.0), Ball(Point(3), 1.0), 4), ConfigError);
}

} // TEST_SUITE
