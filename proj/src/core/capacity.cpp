#include "capacity.hpp"

#include "errors.hpp"
#include "lp.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hl {

namespace {

constexpr double kGolden = 0.6180339887498949;

Point fibonacci_direction(int k, int m) {
  const double z = 1.0 - (2.0 * k + 1.0) / m;
  const double phi = 2.0 * std::numbers::pi * std::fmod(k * kGolden, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Point{s * std::cos(phi), s * std::sin(phi), z};
}

// Rotation of the unit sphere that differs from shell to shell, so that the
// Fibonacci poles do not line up radially.
Point rotate_shell(const Point &p, int shell) {
  const double a = 2.0 * std::numbers::pi * std::fmod((shell + 1) * kGolden, 1.0);
  const double b = std::acos(1.0 - 2.0 * std::fmod((shell + 1) * 0.7548776662466927, 1.0));
  const double x1 = std::cos(a) * p[0] - std::sin(a) * p[1];
  const double y1 = std::sin(a) * p[0] + std::cos(a) * p[1];
  const double z1 = p[2];
  return Point{x1, std::cos(b) * y1 - std::sin(b) * z1, std::sin(b) * y1 + std::cos(b) * z1};
}

} // namespace

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights)
    s += w;
  return s;
}

double cloud_spacing(const Ball &ball, int n_points) {
  const int d = ball.dim();
  const double volume = quad::unit_ball_volume(d) * std::pow(ball.radius, d);
  return std::pow(volume / n_points, 1.0 / d);
}

std::vector<Point> ball_cloud(const Ball &ball, int n_points) {
  if (n_points < 1)
    throw ConfigError("ball_cloud needs at least one point");
  const int d = ball.dim();
  std::vector<Point> cloud;
  cloud.reserve(static_cast<std::size_t>(n_points));
  if (d == 1) {
    for (int i = 0; i < n_points; ++i) {
      const double t = -1.0 + (2.0 * i + 1.0) / n_points;
      cloud.push_back(ball.center + Point{t * ball.radius});
    }
    return cloud;
  }
  if (d > 3) {
    for (int i = 0; i < n_points; ++i)
      cloud.push_back(halton_in_ball(ball, static_cast<std::uint64_t>(i)));
    return cloud;
  }
  // Shells of equal thickness, each holding a number of points proportional
  // to its volume, so that every point stands for the same volume.
  const int shells = std::max(1, static_cast<int>(std::lround(std::pow(n_points, 1.0 / d) *
                                                              (d == 2 ? 0.5641895835477563
                                                                      : 0.6203504908994001))));
  std::vector<int> counts(static_cast<std::size_t>(shells));
  int assigned = 0;
  for (int k = 0; k < shells; ++k) {
    const double outer = std::pow(static_cast<double>(k + 1) / shells, d);
    const int target = static_cast<int>(std::lround(n_points * outer));
    counts[static_cast<std::size_t>(k)] = std::max(1, target - assigned);
    assigned += counts[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < shells; ++k) {
    const int m = counts[static_cast<std::size_t>(k)];
    const double lo = std::pow(static_cast<double>(k) / shells, d);
    const double hi = std::pow(static_cast<double>(k + 1) / shells, d);
    const double rho = ball.radius * std::pow(0.5 * (lo + hi), 1.0 / d);
    for (int j = 0; j < m; ++j) {
      Point w;
      if (d == 2) {
        const double phi = 2.0 * std::numbers::pi * (j + std::fmod(k * kGolden, 1.0)) / m;
        w = Point{std::cos(phi), std::sin(phi)};
      } else {
        w = rotate_shell(fibonacci_direction(j, m), k);
      }
      cloud.push_back(ball.center + w * rho);
    }
  }
  return cloud;
}

std::vector<Point> jittered(std::span<const Point> cloud, double delta) {
  std::vector<Point> out(cloud.begin(), cloud.end());
  if (out.empty())
    return out;
  const int d = out.front().dim();
  Point shift(d);
  for (int i = 0; i < d; ++i)
    shift[i] = 1.0 / std::sqrt(static_cast<double>(d));
  shift *= delta;
  for (Point &p : out)
    p += shift;
  return out;
}

namespace {

CapacityResult solve_kernel(const Eigen::MatrixXd &K, std::span<const Point> support) {
  const PackingSolution sol = solve_packing_lp(K);
  CapacityResult r;
  r.capacity = sol.objective;
  r.duality_gap = sol.duality_gap;
  r.iterations = sol.iterations;
  r.method = sol.method;
  r.n_points = support.size();
  r.measure.points.assign(support.begin(), support.end());
  r.measure.weights.assign(sol.primal.data(), sol.primal.data() + sol.primal.size());
  const Eigen::VectorXd load = K * sol.primal;
  r.constraint_residual = std::max(0.0, (load.array() - 1.0).maxCoeff());
  return r;
}

} // namespace

CapacityResult capacity_lp(const ProcessModel &model, std::span<const Point> support,
                           std::span<const Point> test) {
  if (support.empty())
    throw DomainError("capacity_lp needs a nonempty support");
  if (test.empty())
    throw DomainError("capacity_lp needs at least one test point");
  const auto m = static_cast<Eigen::Index>(test.size());
  const auto n = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd K(m, n);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      K(j, i) = model.green(test[static_cast<std::size_t>(j)], support[static_cast<std::size_t>(i)]);
  return solve_kernel(K, support);
}

CapacityResult self_jittered_capacity(const ProcessModel &model, std::span<const Point> cloud,
                                      double delta) {
  if (cloud.empty())
    throw DomainError("capacity needs a nonempty cloud");
  const int d = cloud.front().dim();
  Point shift(d);
  shift[0] = delta;
  const auto n = static_cast<Eigen::Index>(cloud.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Point &x = cloud[static_cast<std::size_t>(j)];
    K(j, j) = model.green(x + shift, x);
    for (Eigen::Index i = 0; i < j; ++i) {
      K(j, i) = model.green(x, cloud[static_cast<std::size_t>(i)]);
      K(i, j) = K(j, i);
    }
  }
  return solve_kernel(K, cloud);
}

CapacityResult ball_capacity(const ProcessModel &model, const Ball &ball, int n_points) {
  if (n_points < 8)
    throw ConfigError("ball_capacity needs n_points >= 8");
  auto solve = [&](int n) {
    const std::vector<Point> cloud = ball_cloud(ball, n);
    return self_jittered_capacity(model, cloud, 0.5 * cloud_spacing(ball, n));
  };
  CapacityResult fine = solve(n_points);
  const int coarse_n = std::max(8, n_points >> ball.dim());
  if (coarse_n < n_points) {
    const CapacityResult coarse = solve(coarse_n);
    fine.coarse_capacity = coarse.capacity;
    fine.slack = std::abs(fine.capacity - coarse.capacity) / fine.capacity;
  }
  return fine;
}

double compute_CG(const GreenScale &scale, int dim, std::span<const double> r_grid) {
  if (r_grid.empty())
    throw DomainError("compute_CG needs a nonempty radius grid");
  double sup = 0.0;
  for (double r : r_grid) {
    if (!(r > 0.0 && r < scale.R0))
      throw DomainError("compute_CG: radius " + std::to_string(r) + " outside (0, R0)");
    // Local exponent of g near 0 decides integrability of s^(d-1) g(s).
    const double t0 = 1e-9 * r;
    const double p = std::log2(scale(0.5 * t0) / scale(t0));
    if (!(p < dim))
      throw DomainError("compute_CG: s^(d-1) g(s) is not integrable at 0 (g ~ r^-p with p = " +
                        std::to_string(p) + " >= d = " + std::to_string(dim) + ")");
    // s = r u^k removes the power singularity: integrand ~ u^(k(d-p)-1).
    const double k = 1.0 / (dim - std::max(p, 0.0));
    const auto I = quad::integrate(
        [&](double u) {
          if (u <= 0.0)
            return 0.0;
          const double s = r * std::pow(u, k);
          return k * std::pow(u, k - 1.0) * std::pow(s / r, dim - 1) * scale(s);
        },
        0.0, 1.0, 1e-10, "compute_CG radial integral");
    sup = std::max(sup, dim * I.value / scale(r));
  }
  return sup;
}

double c0_from_CG(const ProcessModel &model, double C_G) {
  if (!(C_G >= 1.0))
    throw DomainError("c0_from_CG needs C_G >= 1");
  return model.scale().c * C_G;
}

double equilibrium_potential(const ProcessModel &model, const CapacityResult &result,
                             const Point &x) {
  double s = 0.0;
  for (std::size_t i = 0; i < result.measure.points.size(); ++i) {
    const double w = result.measure.weights[i];
    if (w > 0.0)
      s += model.green(x, result.measure.points[i]) * w;
  }
  return s;
}

CapacityBounds capacity_bounds(const GreenScale &scale, double radius, double c0) {
  const double g = scale(radius);
  return {1.0 / (c0 * g), scale.c / g};
}

} // namespace hl
