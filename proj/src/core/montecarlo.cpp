#include "montecarlo.hpp"

#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hl {

EstimateWithError summarize(const std::vector<double> &values, std::uint64_t seed) {
  if (values.empty())
    throw DomainError("summarize needs at least one sample");
  EstimateWithError e;
  e.n = static_cast<std::int64_t>(values.size());
  e.seed = seed;
  e.mean = compensated_sum(values) / static_cast<double>(e.n);
  if (e.n > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
    const double var = compensated_sum(sq) / static_cast<double>(e.n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(e.n));
  }
  return e;
}

HittingEstimate hitting_probability(const ProcessModel &model, std::span<const Ball> target,
                                    const Ball &domain, const Point &x, std::int64_t n,
                                    const WosConfig &config) {
  if (n < 1)
    throw ConfigError("hitting_probability needs n >= 1");
  if (config.max_steps < 1)
    throw ConfigError("hitting_probability needs max_steps >= 1");
  if (!(config.boundary_shrink > 0.0 && config.boundary_shrink < 1.0))
    throw ConfigError("boundary_shrink must lie in (0, 1)");
  if (target.empty())
    throw DomainError("hitting_probability needs a nonempty target");
  if (!model.has_jumps() && model.kind() != ProcessKind::Brownian)
    throw DomainError("hitting_probability is not available for " + model.name());
  for (const Ball &b : target)
    if (distance(b.center, domain.center) + b.radius > domain.radius * (1.0 + 1e-12))
      throw DomainError("hitting_probability: target ball " + b.center.to_string() +
                        " is not inside the domain");
  if (!domain.contains(x))
    throw DomainError("hitting_probability: x = " + x.to_string() + " is not in the domain");

  const bool brownian = model.kind() == ProcessKind::Brownian;
  const double eps = config.epsilon_shell * domain.radius;
  std::vector<double> hit(static_cast<std::size_t>(n), 0.0);
  std::vector<double> steps(static_cast<std::size_t>(n), 0.0);
  std::vector<char> censored(static_cast<std::size_t>(n), 0);

  parallel_for(n, config.threads, [&](std::int64_t i) {
    SampleStream rng(config.seed, static_cast<std::uint64_t>(i));
    Point p = x;
    const auto k = static_cast<std::size_t>(i);
    for (std::int64_t s = 0;; ++s) {
      double to_target = kInfinity;
      for (const Ball &b : target)
        to_target = std::min(to_target, distance(p, b.center) - b.radius);
      if (to_target < 0.0) {
        hit[k] = 1.0;
        steps[k] = static_cast<double>(s);
        return;
      }
      const double to_domain = domain.depth(p);
      if (!(to_domain > 0.0)) {
        steps[k] = static_cast<double>(s);
        return;
      }
      if (brownian && std::min(to_target, to_domain) < eps) {
        hit[k] = to_target <= to_domain ? 1.0 : 0.0;
        steps[k] = static_cast<double>(s);
        return;
      }
      if (s == config.max_steps) {
        censored[k] = 1;
        steps[k] = static_cast<double>(s);
        return;
      }
      // Brownian exits land on the sphere, so the full distance is exact.
      // Stable jumps can overshoot either way; shrink keeps the walk local.
      const double reach = std::min(to_target, to_domain);
      const double radius = brownian ? reach : config.boundary_shrink * reach;
      p = sample_centered_exit(model, p, radius, rng);
    }
  });

  HittingEstimate out;
  out.estimate = summarize(hit, config.seed);
  out.censored = std::count(censored.begin(), censored.end(), 1);
  out.censored_fraction = static_cast<double>(out.censored) / static_cast<double>(n);
  out.censoring_warning = out.censored_fraction > kCensoringLimit;
  out.mean_steps = compensated_sum(steps) / static_cast<double>(n);
  return out;
}

std::vector<Point> sample_exits(const ProcessModel &model, const Ball &ball, const Point &x,
                                std::int64_t n, std::uint64_t seed, int threads) {
  if (n < 1)
    throw ConfigError("sample_exits needs n >= 1");
  std::vector<Point> out(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](std::int64_t i) {
    SampleStream rng(seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = sample_exit(model, ball, x, rng).z;
  });
  return out;
}

namespace {

double chi_square_critical(int dof) {
  const boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::quantile(boost::math::complement(dist, kSignificance));
}

} // namespace

IteratedBalayageReport iterated_balayage_check(const ProcessModel &model, const Point &x,
                                               double r_small, double r_large, std::int64_t n,
                                               std::uint64_t seed, int n_radial, int threads) {
  if (!(r_small > 0.0 && r_small <= r_large))
    throw ConfigError("iterated_balayage_check needs 0 < r_small <= r_large");
  if (n < 1 || n_radial < 1)
    throw ConfigError("iterated_balayage_check needs n >= 1 and at least one bin");
  const int d = model.dim();
  const Ball large(x, r_large);
  const bool stable = model.kind() == ProcessKind::Stable;
  if (!stable && model.kind() != ProcessKind::Brownian)
    throw DomainError("iterated_balayage_check is not available for " + model.name());

  // Equiprobable bin edges of the direct law: for stable exits in
  // u = (r_large / |z - x|)^2 ~ Beta(alpha/2, 1 - alpha/2); for Brownian exits
  // in (1 + w_0) / 2 ~ Beta((d-1)/2, (d-1)/2), w = (z - x) / r_large.
  const double pa = stable ? 0.5 * model.alpha() : 0.5 * (d - 1);
  const double pb = stable ? 1.0 - 0.5 * model.alpha() : 0.5 * (d - 1);
  const boost::math::beta_distribution<double> law(pa, pb);
  std::vector<double> edges(static_cast<std::size_t>(n_radial) + 1);
  edges.front() = 0.0;
  edges.back() = 1.0;
  for (int k = 1; k < n_radial; ++k)
    edges[static_cast<std::size_t>(k)] = boost::math::quantile(law, static_cast<double>(k) / n_radial);
  const int sides = stable ? 2 : 1;
  const int n_cells = n_radial * sides;

  auto cell_of = [&](const Point &z) {
    const Point w = z - x;
    double u;
    int side = 0;
    if (stable) {
      u = (r_large * r_large) / w.norm_squared();
      side = w[0] >= 0.0 ? 1 : 0;
    } else {
      u = 0.5 * (1.0 + std::clamp(w[0] / r_large, -1.0, 1.0));
    }
    const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, u);
    const int bin = static_cast<int>(it - (edges.begin() + 1));
    return bin * sides + side;
  };

  std::vector<int> direct_cell(static_cast<std::size_t>(n)), staged_cell(static_cast<std::size_t>(n));
  std::vector<double> stages(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](std::int64_t i) {
    const auto k = static_cast<std::size_t>(i);
    SampleStream direct(seed, 2 * static_cast<std::uint64_t>(i));
    direct_cell[k] = cell_of(sample_exit(model, large, x, direct).z);
    SampleStream staged(seed, 2 * static_cast<std::uint64_t>(i) + 1);
    Point z = sample_centered_exit(model, x, r_small, staged);
    int count = 1;
    while (large.contains(z)) {
      z = sample_exit(model, large, z, staged).z;
      ++count;
    }
    staged_cell[k] = cell_of(z);
    stages[k] = count;
  });

  IteratedBalayageReport rep;
  rep.cells.resize(static_cast<std::size_t>(n_cells));
  for (int c = 0; c < n_cells; ++c) {
    auto &cell = rep.cells[static_cast<std::size_t>(c)];
    cell.label = "bin" + std::to_string(c / sides) + (stable ? (c % sides ? "+" : "-") : "");
    cell.expected = static_cast<double>(n) / n_cells;
  }
  for (std::size_t k = 0; k < direct_cell.size(); ++k) {
    ++rep.cells[static_cast<std::size_t>(direct_cell[k])].direct;
    ++rep.cells[static_cast<std::size_t>(staged_cell[k])].two_stage;
  }
  int used = 0;
  for (auto &cell : rep.cells) {
    const double a = static_cast<double>(cell.direct);
    const double b = static_cast<double>(cell.two_stage);
    if (a + b == 0.0)
      continue;
    ++used;
    rep.chi_square += (a - b) * (a - b) / (a + b);
    cell.z = (a - b) / std::sqrt(a + b);
    if (cell.expected >= 100.0)
      rep.max_abs_z = std::max(rep.max_abs_z, std::abs(cell.z));
  }
  rep.dof = std::max(1, used - 1);
  rep.critical = chi_square_critical(rep.dof);
  rep.pass = rep.chi_square < rep.critical && rep.max_abs_z <= 4.0;
  rep.mean_stages = compensated_sum(stages) / static_cast<double>(n);
  return rep;
}

namespace {

struct RatioPoint {
  double s = 0.0;   // |y| / r
  double t = 0.0;   // (r / |z|)^2
  double phi = 0.0; // angle between y and z
};

} // namespace

JumpComparison jump_comparison_constant(const ProcessModel &model, double alpha_ratio, int n_y,
                                        int n_z, double radius) {
  if (!(alpha_ratio > 0.0 && alpha_ratio < 1.0))
    throw ConfigError("jump_comparison_constant needs 0 < alpha_ratio < 1");
  if (n_y < 2 || n_z < 2)
    throw ConfigError("jump_comparison_constant needs n_y, n_z >= 2");
  if (!(radius > 0.0))
    throw ConfigError("jump_comparison_constant needs radius > 0");
  JumpComparison out;
  out.alpha_ratio = alpha_ratio;
  out.radius = radius;
  out.n_y = n_y;
  out.n_z = n_z;
  const int d = model.dim();
  out.y = Point(d);
  out.z = unit_vector(d, 0);
  if (model.kind() == ProcessKind::Brownian) {
    out.diffusion_trivial = true;
    out.c_J = 1.0;
    return out;
  }
  if (model.kind() != ProcessKind::Stable)
    throw DomainError("jump_comparison_constant is not available for " + model.name());

  const double a = alpha_ratio;
  const double al = model.alpha();
  const Point origin(d);
  const Ball inner(origin, a * radius);
  const Ball outer(origin, radius);

  auto place = [&](const RatioPoint &q, Point &y, Point &z) {
    z = unit_vector(d, 0) * (radius / std::sqrt(q.t));
    y = Point(d);
    if (d == 1) {
      y[0] = radius * q.s * std::cos(q.phi);
    } else {
      y[0] = radius * q.s * std::cos(q.phi);
      y[1] = radius * q.s * std::sin(q.phi);
    }
  };
  auto ratio = [&](const RatioPoint &q) {
    if (q.t <= 0.0)
      return std::pow(a * a / (1.0 - q.s * q.s), 0.5 * al);
    Point y, z;
    place(q, y, z);
    return model.poisson_kernel(inner, origin, z) / model.poisson_kernel(outer, y, z);
  };

  const int n_phi = d == 1 ? 2 : n_y;
  RatioPoint best;
  double best_value = -1.0;
  for (int i = 0; i < n_y; ++i) {
    for (int j = 0; j < n_z; ++j) {
      for (int k = 0; k < n_phi; ++k) {
        RatioPoint q{a * i / (n_y - 1.0), static_cast<double>(j) / n_z,
                     std::numbers::pi * k / (n_phi - 1.0)};
        const double v = ratio(q);
        if (v > best_value) {
          best_value = v;
          best = q;
        }
      }
    }
  }
  out.grid_value = best_value;

  // Compass search from the best grid point, clamped to the closed domain.
  double hs = a / (n_y - 1.0), ht = 1.0 / n_z, hp = std::numbers::pi / (n_phi - 1.0);
  const double t_max = 1.0 - 1e-9;
  for (int iter = 0; iter < 10000 && (hs > 1e-14 || ht > 1e-14 || (d > 1 && hp > 1e-14)); ++iter) {
    bool moved = false;
    for (int c = 0; c < (d == 1 ? 2 : 3); ++c) {
      for (double sign : {1.0, -1.0}) {
        RatioPoint q = best;
        if (c == 0)
          q.s = std::clamp(q.s + sign * hs, 0.0, a);
        else if (c == 1)
          q.t = std::clamp(q.t + sign * ht, 0.0, t_max);
        else
          q.phi = std::clamp(q.phi + sign * hp, 0.0, std::numbers::pi);
        const double v = ratio(q);
        if (v > best_value) {
          best_value = v;
          best = q;
          moved = true;
        }
      }
    }
    if (!moved) {
      hs *= 0.5;
      ht *= 0.5;
      hp *= 0.5;
    }
  }

  out.raw = best_value;
  out.c_J = std::max(1.0, best_value);
  out.at_infinity = best.t <= 0.0;
  if (out.at_infinity) {
    RatioPoint q = best;
    q.t = 1.0;
    Point z;
    place(q, out.y, z);
    out.z = unit_vector(d, 0) * kInfinity;
  } else {
    place(best, out.y, out.z);
  }
  out.refinement_warning = (out.raw - out.grid_value) > 1e-2 * out.raw;
  return out;
}

JumpMonteCarlo jump_comparison_mc(const ProcessModel &model, double alpha_ratio, const Point &y,
                                  std::int64_t n, std::uint64_t seed, int threads) {
  if (model.kind() != ProcessKind::Stable)
    throw DomainError("jump_comparison_mc needs a stable model");
  const int d = model.dim();
  if (d > 3)
    throw DomainError("jump_comparison_mc supports d <= 3");
  const double r = 1.0;
  const double a = alpha_ratio;
  const Point origin(d);
  const Ball inner(origin, a * r);
  const Ball outer(origin, r);
  if (!(y.norm() < r))
    throw DomainError("jump_comparison_mc: y must lie in B(0, r)");
  const Point axis = y.norm() > 0.0 ? y * (1.0 / y.norm()) : unit_vector(d, 0);

  const std::vector<double> rho = {1.0, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, kInfinity};
  const int n_shells = static_cast<int>(rho.size()) - 1;
  const double al = model.alpha();
  const boost::math::beta_distribution<double> u_law(0.5 * al, 1.0 - 0.5 * al);

  JumpMonteCarlo out;
  for (int k = 0; k < n_shells; ++k) {
    for (int side : {1, -1}) {
      JumpCell cell;
      cell.rho_lo = rho[static_cast<std::size_t>(k)] * r;
      cell.rho_hi = rho[static_cast<std::size_t>(k) + 1] * r;
      cell.side = side;
      // Centred exit: |z| = a r / sqrt(U), isotropic.
      const double u_hi = std::pow(a * r / cell.rho_lo, 2);
      const double u_lo = std::isinf(cell.rho_hi) ? 0.0 : std::pow(a * r / cell.rho_hi, 2);
      cell.p_inner_exact = 0.5 * (boost::math::cdf(u_law, u_hi) - boost::math::cdf(u_law, u_lo));
      const Point cap_axis = axis * static_cast<double>(side);
      cell.p_outer_exact =
          quad::integrate_exterior_radial(
              [&](double p) {
                return std::pow(p, d - 1) *
                       quad::integrate_cap(
                           d, [&](const Point &w) { return model.poisson_kernel(outer, y, w * p); },
                           cap_axis, 0.5 * std::numbers::pi, 1e-9, "exit law cell, angular")
                           .value;
              },
              r, cell.rho_lo, cell.rho_hi, al, 1e-8, "exit law cell, radial")
              .value;
      out.cells.push_back(cell);
    }
  }

  auto cell_index = [&](const Point &z) {
    const double p = z.norm() / r;
    if (p < 1.0)
      return -1;
    const auto it = std::upper_bound(rho.begin(), rho.end(), p);
    const int k = static_cast<int>(it - rho.begin()) - 1;
    return 2 * k + (dot(z, axis) >= 0.0 ? 0 : 1);
  };
  const std::vector<Point> zi = sample_exits(model, inner, origin, n, seed, threads);
  const std::vector<Point> zo = sample_exits(model, outer, y, n, seed ^ 0x5bd1e995ULL, threads);
  std::vector<std::int64_t> ci(out.cells.size(), 0), co(out.cells.size(), 0);
  for (const Point &z : zi)
    if (int c = cell_index(z); c >= 0)
      ++ci[static_cast<std::size_t>(c)];
  for (const Point &z : zo)
    if (int c = cell_index(z); c >= 0)
      ++co[static_cast<std::size_t>(c)];

  out.pass = true;
  const double nn = static_cast<double>(n);
  for (std::size_t c = 0; c < out.cells.size(); ++c) {
    JumpCell &cell = out.cells[c];
    cell.p_inner_mc = ci[c] / nn;
    cell.p_outer_mc = co[c] / nn;
    cell.se_inner = std::sqrt(std::max(cell.p_inner_exact * (1.0 - cell.p_inner_exact), 1.0 / nn) / nn);
    cell.se_outer = std::sqrt(std::max(cell.p_outer_exact * (1.0 - cell.p_outer_exact), 1.0 / nn) / nn);
    cell.agree = std::abs(cell.p_inner_mc - cell.p_inner_exact) <= 4.0 * cell.se_inner &&
                 std::abs(cell.p_outer_mc - cell.p_outer_exact) <= 4.0 * cell.se_outer;
    out.pass = out.pass && cell.agree;
    if (ci[c] >= 100 && co[c] >= 100)
      out.max_empirical_ratio = std::max(out.max_empirical_ratio, cell.p_inner_mc / cell.p_outer_mc);
  }
  return out;
}

LevyConditions check_levy_conditions(const ProcessModel &model, double C, double a, int grid_n) {
  if (model.kind() != ProcessKind::Stable)
    throw DomainError("check_levy_conditions needs a stable model");
  if (!(a >= 3.0))
    throw ConfigError("check_levy_conditions needs a >= 3");
  if (grid_n < 1)
    throw ConfigError("check_levy_conditions needs grid_n >= 1");
  const int d = model.dim();
  const Point x(d);
  const Ball unit(x, 1.0);
  LevyConditions out;
  for (int i = 0; i < grid_n; ++i) {
    const Point y = halton_in_ball(unit, static_cast<std::uint64_t>(i));
    for (int j = 0; j < grid_n; ++j) {
      const double rho = a * std::pow(2.0, 4.0 * radical_inverse(7, static_cast<std::uint64_t>(j) + 1));
      const Point z = halton_direction(d, static_cast<std::uint64_t>(j), 2) * rho;
      if (distance(x, z) < distance(y, z))
        continue;
      out.nxy_sup = std::max(out.nxy_sup, model.levy_density(x, z) / model.levy_density(y, z));
      ++out.samples;
    }
  }
  out.nxy_pass = out.nxy_sup <= C;
  out.C0 = model.weak_decreasing_constant();
  out.doubling = model.levy_doubling_constant();
  const Point z = unit_vector(d, 0) * a;
  out.half_distance_ratio = model.levy_density(x, z) / model.levy_density(z * 0.5, z);
  return out;
}

} // namespace hl
