#pragma once

#include "model.hpp"
#include "point.hpp"
#include "scale.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hl {

struct DiscreteMeasure {
  std::vector<Point> points;
  std::vector<double> weights;

  double total_mass() const;
};

struct CapacityResult {
  double capacity = 0.0;
  DiscreteMeasure measure;
  // max over test points of (G mu - 1)+
  double constraint_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  std::string method;
  std::size_t n_points = 0;
  // Relative change against the next coarser cloud; NaN when not computed.
  double slack = std::numeric_limits<double>::quiet_NaN();
  double coarse_capacity = std::numeric_limits<double>::quiet_NaN();
};

// maximize sum mu_i subject to sum_i G(x_j, y_i) mu_i <= 1 at every test
// point x_j, mu >= 0. Support atoms that coincide with a test point get
// weight zero (G = inf on the diagonal).
CapacityResult capacity_lp(const ProcessModel &model, std::span<const Point> support,
                           std::span<const Point> test);

// Quasi-uniform cloud of n points filling the ball: equal-volume radial
// shells with low-discrepancy angles.
std::vector<Point> ball_cloud(const Ball &ball, int n_points);

// Typical distance between neighbouring cloud points, (|B| / n)^(1/d).
double cloud_spacing(const Ball &ball, int n_points);

// The cloud shifted by delta along the diagonal direction.
std::vector<Point> jittered(std::span<const Point> cloud, double delta);

// Capacity of a cloud with the test points placed on the atoms, except that
// each atom's own potential is evaluated at distance delta (the constraint at
// a test point jittered by delta off its atom). Symmetric kernel matrix.
CapacityResult self_jittered_capacity(const ProcessModel &model, std::span<const Point> cloud,
                                      double delta);

// self_jittered_capacity on ball_cloud(ball, n) with delta = spacing / 2. Also solves
// the coarser level n / 2^d (at least 8 points) and reports the relative
// difference as slack.
CapacityResult ball_capacity(const ProcessModel &model, const Ball &ball, int n_points);

// sup over r_grid of d int_0^r s^(d-1) g(s) ds / (r^d g(r)).
double compute_CG(const GreenScale &scale, int dim, std::span<const double> r_grid);

// c0 = c * C_G.
double c0_from_CG(const ProcessModel &model, double C_G);

// G mu (x).
double equilibrium_potential(const ProcessModel &model, const CapacityResult &result,
                             const Point &x);

struct CapacityBounds {
  double lower;
  double upper;
};

// [(c0 g(r))^-1, c / g(r)].
CapacityBounds capacity_bounds(const GreenScale &scale, double radius, double c0);

} // namespace hl
