#include <doctest.h>

#include "../common/oracles.hpp"

#include "model.hpp"
#include "montecarlo.hpp"
#include "sampling.hpp"

#include <cmath>

using namespace hl;

TEST_SUITE("montecarlo") {

TEST_CASE("summarize") {
  const EstimateWithError e = summarize({1.0, 2.0, 3.0, 4.0}, 9);
  CHECK(e.mean == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.n == 4);
  CHECK(e.seed == 9);
}

TEST_CASE("Brownian walk-on-spheres against the concentric formula") {
  const ProcessModel m = ProcessModel::brownian(3);
  const Ball target(Point(3), 1.0), domain(Point(3), 4.0);
  const Ball targets[] = {target};
  WosConfig cfg;
  cfg.seed = 42;
  for (double r : {1.5, 3.0}) {
    const HittingEstimate h = hitting_probability(m, targets, domain, Point{0.0, r, 0.0}, 20000, cfg);
    const double exact = oracle::concentric_hitting(3, 1.0, 4.0, r);
    CHECK(std::abs(h.estimate.mean - exact) < 4 * h.estimate.std_error);
    CHECK(h.censored == 0);
  }
  // d = 5 with an off-origin pair of balls.
  const ProcessModel m5 = ProcessModel::brownian(5);
  Point c(5);
  c[4] = 1.0;
  const Ball t5[] = {Ball(c, 0.5)};
  Point x = c;
  x[0] = 1.0;
  const HittingEstimate h5 = hitting_probability(m5, t5, Ball(c, 2.0), x, 20000, cfg);
  const double exact5 = oracle::concentric_hitting(5, 0.5, 2.0, 1.0);
  CHECK(std::abs(h5.estimate.mean - exact5) < 4 * h5.estimate.std_error);
}

TEST_CASE("estimates do not depend on the thread count") {
  const ProcessModel m = ProcessModel::stable(3, 1.0);
  const Ball targets[] = {Ball(Point(3), 0.2)};
  WosConfig cfg;
  cfg.seed = 77;
  cfg.threads = 1;
  const HittingEstimate a = hitting_probability(m, targets, Ball(Point(3), 1.0), Point{0.5, 0, 0}, 5000, cfg);
  cfg.threads = 3;
  const HittingEstimate b = hitting_probability(m, targets, Ball(Point(3), 1.0), Point{0.5, 0, 0}, 5000, cfg);
  CHECK(a.estimate.mean == b.estimate.mean);
  CHECK(a.estimate.std_error == b.estimate.std_error);
  CHECK(a.mean_steps == b.mean_steps);
}

TEST_CASE("censored walks count as misses and raise the warning") {
  const ProcessModel m = ProcessModel::brownian(3);
  const Ball targets[] = {Ball(Point(3), 1.0)};
  WosConfig cfg;
  cfg.max_steps = 1;
  const HittingEstimate h = hitting_probability(m, targets, Ball(Point(3), 4.0), Point{2.0, 0, 0}, 1000, cfg);
  CHECK(h.censored > 900);
  CHECK(h.censoring_warning);
  CHECK(h.estimate.mean <= 1.0 - h.censored_fraction + 1e-12);
}

TEST_CASE("hitting probability dominates the reduced function minus its exterior level") {
  // P^x[T_A < tau_U] >= R_1^A(x) - gamma with gamma = sup of R_1^A off U.
  const ProcessModel m = ProcessModel::stable(3, 1.0);
  const double rho = 0.1;
  const Ball A(Point(3), rho), U(Point(3), 1.0);
  const double gamma = oracle::stable_ball_hitting(3, 1.0, rho, 1.0);
  const Ball targets[] = {A};
  WosConfig cfg;
  cfg.seed = 3;
  for (double r : {0.15, 0.3, 0.6}) {
    const HittingEstimate h = hitting_probability(m, targets, U, Point{r, 0.0, 0.0}, 20000, cfg);
    const double reduced = oracle::stable_ball_hitting(3, 1.0, rho, r);
    CHECK(h.estimate.mean >= reduced - gamma - 3 * h.estimate.std_error);
    CHECK(h.estimate.mean <= reduced + 3 * h.estimate.std_error);
  }
}

TEST_CASE("two-stage and direct exit laws agree") {
  const IteratedBalayageReport b = iterated_balayage_check(ProcessModel::brownian(3), Point(3), 0.5, 1.0, 20000, 8);
  CHECK(b.pass);
  CHECK(b.mean_stages > 1.0);
  const IteratedBalayageReport s =
      iterated_balayage_check(ProcessModel::stable(2, 1.5), Point{0.3, 0.3}, 1.0, 3.0, 20000, 8, 5);
  CHECK(s.pass);
  CHECK(s.cells.size() == 10);
  CHECK(s.chi_square < s.critical);
}

TEST_CASE("jump comparison constant") {
  const JumpComparison b = jump_comparison_constant(ProcessModel::brownian(3), 0.25, 8, 8);
  CHECK(b.diffusion_trivial);
  CHECK(b.c_J == 1.0);

  const ProcessModel m = ProcessModel::stable(1, 1.0);
  const double a = 1.0 / 16;
  const JumpComparison j = jump_comparison_constant(m, a, 32, 128);
  CHECK(std::isfinite(j.c_J));
  CHECK(j.c_J >= 1.0);
  CHECK(j.raw > 0.0);
  CHECK(j.raw >= j.grid_value);
  // Independent brute-force scan never beats the reported supremum.
  const Ball inner(Point{0.0}, a), outer(Point{0.0}, 1.0);
  double brute = 0.0;
  for (int i = 0; i <= 200; ++i)
    for (int k = 1; k <= 400; ++k) {
      const Point y{a * (2.0 * i / 200 - 1.0)};
      const Point z{1.0 + 0.1 * k * k / 400.0};
      brute = std::max(brute, m.poisson_kernel(inner, Point{0.0}, z) / m.poisson_kernel(outer, y, z));
    }
  CHECK(brute <= j.raw * (1 + 1e-12));
  CHECK(brute >= 0.99 * j.raw);
  // Dilation invariance.
  CHECK(jump_comparison_constant(m, a, 32, 128, 5.0).raw == doctest::Approx(j.raw).epsilon(1e-10));

  const JumpComparison j2 = jump_comparison_constant(ProcessModel::stable(2, 1.0), 0.25, 16, 64);
  CHECK(j2.c_J >= 1.0);
  CHECK(std::isfinite(j2.raw));
}

TEST_CASE("exit-law cells agree with quadrature") {
  const ProcessModel m = ProcessModel::stable(2, 1.0);
  const JumpMonteCarlo mc = jump_comparison_mc(m, 0.25, Point{0.2, 0.0}, 20000, 4);
  CHECK(mc.pass);
  double inner = 0.0, outer = 0.0;
  for (const JumpCell &c : mc.cells) {
    inner += c.p_inner_exact;
    outer += c.p_outer_exact;
  }
  // Only the inner exits that clear B(0, 1) fall in the cells.
  CHECK(inner == doctest::Approx(oracle::stable_centered_exit_tail(1.0, 4.0)).epsilon(1e-8));
  CHECK(outer == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Levy density conditions") {
  const ProcessModel m = ProcessModel::stable(3, 1.0);
  const LevyConditions c = check_levy_conditions(m, 1.0, 3.0, 40);
  CHECK(c.nxy_sup <= 1.0 + 1e-12);
  CHECK(c.nxy_pass);
  CHECK(c.samples > 0);
  CHECK(c.C0 == 1.0);
  CHECK(c.doubling == doctest::Approx(16.0));
  CHECK(c.half_distance_ratio == doctest::Approx(1.0 / 16.0));
}

} // TEST_SUITE
