#include "harnack.hpp"

#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hl {

HarmonicFunction HarmonicFunction::constant(const ProcessModel &model, const Ball &ball,
                                            double value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw ConfigError("constant boundary data must be finite and >= 0");
  HarmonicFunction h(model, ball);
  h.kind_ = BoundaryKind::Constant;
  h.value_ = value;
  h.label_ = "constant";
  return h;
}

HarmonicFunction HarmonicFunction::cells(const ProcessModel &model, const Ball &ball,
                                         std::vector<BoundaryCell> cells, std::string label) {
  if (cells.empty())
    throw ConfigError("cell boundary data needs at least one cell");
  if (model.dim() > 3)
    throw DomainError("cell boundary data supports d <= 3");
  for (BoundaryCell &c : cells) {
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
      throw ConfigError("cell weights must be finite and >= 0");
    if (!(c.rho_lo < c.rho_hi))
      throw ConfigError("cell needs rho_lo < rho_hi");
    if (c.axis.dim() == 0)
      c.axis = unit_vector(model.dim(), 0);
    if (c.axis.dim() != model.dim())
      throw ConfigError("cell axis has the wrong dimension");
    c.axis *= 1.0 / c.axis.norm();
  }
  HarmonicFunction h(model, ball);
  h.kind_ = BoundaryKind::Cells;
  h.cells_ = std::move(cells);
  h.label_ = label.empty() ? "cells" : std::move(label);
  return h;
}

HarmonicFunction HarmonicFunction::pole(const ProcessModel &model, const Ball &ball,
                                        const Point &z0) {
  const double rz = distance(z0, ball.center);
  if (model.kind() == ProcessKind::Brownian) {
    if (std::abs(rz - ball.radius) > 1e-9 * ball.radius)
      throw DomainError("Brownian poles lie on the sphere");
  } else if (model.kind() == ProcessKind::Stable) {
    if (!(rz > ball.radius))
      throw DomainError("stable poles lie outside the closed ball");
  } else {
    throw DomainError("poles are not available for " + model.name());
  }
  HarmonicFunction h(model, ball);
  h.kind_ = BoundaryKind::Pole;
  h.pole_ = z0;
  h.label_ = "pole" + z0.to_string();
  return h;
}

double HarmonicFunction::boundary_value(const Point &z) const {
  switch (kind_) {
  case BoundaryKind::Constant:
    return value_;
  case BoundaryKind::Pole:
    return 0.0;
  case BoundaryKind::Cells: {
    const Point w = z - ball_.center;
    const double rho = w.norm();
    double v = 0.0;
    for (const BoundaryCell &c : cells_) {
      if (rho < c.rho_lo || rho >= c.rho_hi)
        continue;
      const double cosang = rho > 0.0 ? dot(w, c.axis) / rho : 1.0;
      if (std::acos(std::clamp(cosang, -1.0, 1.0)) <= c.half_angle)
        v += c.weight;
    }
    return v;
  }
  }
  return 0.0;
}

double HarmonicFunction::evaluate(const Point &x) const {
  const double rx = distance(x, ball_.center);
  const bool brownian = model_.kind() == ProcessKind::Brownian;
  if (!(rx < ball_.radius))
    return boundary_value(x);
  switch (kind_) {
  case BoundaryKind::Constant:
    return value_;
  case BoundaryKind::Pole:
    return model_.poisson_kernel(ball_, x, pole_);
  case BoundaryKind::Cells:
    break;
  }
  const int d = model_.dim();
  const double R = ball_.radius;
  double total = 0.0;
  for (const BoundaryCell &c : cells_) {
    if (c.weight == 0.0)
      continue;
    auto angular = [&](double rho) {
      return quad::integrate_cap(
                 d,
                 [&](const Point &w) {
                   return model_.poisson_kernel(ball_, x, ball_.center + w * rho);
                 },
                 c.axis, c.half_angle, kHarmonicTolerance, "harmonic function, angular")
          .value;
    };
    if (brownian) {
      if (R >= c.rho_lo && R < c.rho_hi)
        total += c.weight * std::pow(R, d - 1) * angular(R);
      continue;
    }
    const double lo = std::max(c.rho_lo, R);
    if (!(lo < c.rho_hi))
      continue;
    total += c.weight * quad::integrate_exterior_radial(
                            [&](double rho) { return std::pow(rho, d - 1) * angular(rho); }, R,
                            lo, c.rho_hi, model_.alpha(), kHarmonicTolerance,
                            "harmonic function, radial")
                            .value;
  }
  return total;
}

MeanValueResult mean_value_check(const HarmonicFunction &h, const Ball &inner, const Point &x,
                                 std::int64_t n, std::uint64_t seed, int threads) {
  const Ball &outer = h.ball();
  if (distance(inner.center, outer.center) + inner.radius >= outer.radius)
    throw DomainError("mean_value_check: the inner ball must be compactly inside h's ball");
  if (!inner.contains(x))
    throw DomainError("mean_value_check: x must lie in the inner ball");
  if (n < 2)
    throw ConfigError("mean_value_check needs n >= 2");
  const ProcessModel &model = h.model();
  std::vector<double> values(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](std::int64_t i) {
    SampleStream rng(seed, static_cast<std::uint64_t>(i));
    const Point z = sample_exit(model, inner, x, rng).z;
    values[static_cast<std::size_t>(i)] = h.evaluate(z);
  });
  MeanValueResult out;
  out.h_x = h.evaluate(x);
  out.mc = summarize(values, seed);
  if (h.kind() == BoundaryKind::Pole && model.kind() == ProcessKind::Stable)
    out.jump_term = model.poisson_kernel(inner, x, h.pole_point());
  const double diff = out.mc.mean + out.jump_term - out.h_x;
  if (out.mc.std_error > 0.0)
    out.residual = diff / out.mc.std_error;
  else
    out.residual = std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(out.h_x)) ? 0.0 : kInfinity;
  return out;
}

std::vector<Point> inner_grid(const Ball &ball, int n) {
  std::vector<Point> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  grid.push_back(ball.center);
  for (int i = 0; i < n; ++i)
    grid.push_back(halton_in_ball(ball, static_cast<std::uint64_t>(i)));
  return grid;
}

std::vector<HarmonicFunction> pole_family(const ProcessModel &model, const Ball &ball, int count) {
  if (count < 1)
    throw ConfigError("pole_family needs count >= 1");
  const int d = model.dim();
  std::vector<HarmonicFunction> family;
  family.reserve(static_cast<std::size_t>(count));
  if (model.kind() == ProcessKind::Brownian) {
    for (int i = 0; i < count; ++i)
      family.push_back(HarmonicFunction::pole(
          model, ball, ball.center + halton_direction(d, static_cast<std::uint64_t>(i)) * ball.radius));
    return family;
  }
  const int n_dirs = d == 1 ? 2 : std::max(1, static_cast<int>(std::lround(std::sqrt(count / 2.0))));
  const int n_radii = (count + n_dirs - 1) / n_dirs;
  const std::vector<double> offsets = log_grid(1e-3, 1e2, std::max(n_radii, 2));
  for (int k = 0; k < n_dirs && static_cast<int>(family.size()) < count; ++k) {
    const Point dir = d == 1 ? Point{k == 0 ? 1.0 : -1.0}
                             : halton_direction(d, static_cast<std::uint64_t>(k));
    for (int j = 0; j < n_radii && static_cast<int>(family.size()) < count; ++j) {
      const double s = n_radii == 1 ? 1.0 : offsets[static_cast<std::size_t>(j)];
      family.push_back(HarmonicFunction::pole(model, ball, ball.center + dir * (ball.radius * (1.0 + s))));
    }
  }
  return family;
}

HarnackRatioResult harnack_ratio(const Point &x0, double R, const HarnackConstants &constants,
                                 const std::vector<HarmonicFunction> &family, int grid_n,
                                 int threads) {
  if (!(R > 0.0))
    throw ConfigError("harnack_ratio needs R > 0");
  if (family.empty())
    throw ConfigError("harnack_ratio needs a nonempty family");
  HarnackRatioResult out;
  out.K = constants.K;
  out.inner_radius = constants.alpha * constants.alpha * R;
  const std::vector<Point> grid = inner_grid(Ball(x0, out.inner_radius), grid_n);
  for (std::size_t f = 0; f < family.size(); ++f) {
    const HarmonicFunction &h = family[f];
    if (!(h.ball().center == x0) || h.ball().radius < kNeighbourhoodMargin * R * (1.0 - 1e-12))
      throw DomainError("harnack_ratio: family member " + std::to_string(f) +
                        " is not harmonic on B(x0, 1.05 R)");
  }
  out.rows.resize(family.size());
  parallel_for(static_cast<std::int64_t>(family.size()), threads, [&](std::int64_t f) {
    const HarmonicFunction &h = family[static_cast<std::size_t>(f)];
    RatioRow &row = out.rows[static_cast<std::size_t>(f)];
    row.label = h.label();
    row.sup = 0.0;
    row.inf = kInfinity;
    for (const Point &p : grid) {
      const double v = h.evaluate(p);
      row.sup = std::max(row.sup, v);
      row.inf = std::min(row.inf, v);
    }
    row.vanishing = row.inf < kVanishingLevel;
    if (!row.vanishing)
      row.ratio = row.sup / row.inf;
  });
  for (std::size_t f = 0; f < out.rows.size(); ++f) {
    const RatioRow &row = out.rows[f];
    if (row.vanishing) {
      ++out.excluded;
    } else if (row.ratio > out.max_ratio) {
      out.max_ratio = row.ratio;
      out.argmax = static_cast<int>(f);
    }
  }
  out.pass = out.max_ratio <= out.K;
  return out;
}

DiffusionCheck diffusion_global_check(const ProcessModel &model, const Point &x0, double R,
                                      const Point &z_far, int grid_n) {
  if (model.kind() != ProcessKind::Brownian)
    throw DomainError("diffusion_global_check needs a Brownian model");
  if (!(distance(z_far, x0) > 2.0 * R))
    throw DomainError("diffusion_global_check: z_far must lie outside B(x0, 2R)");
  DiffusionCheck out;
  double sup = 0.0, inf = kInfinity;
  for (const Point &p : inner_grid(Ball(x0, 0.5 * R), grid_n)) {
    const double v = model.green(p, z_far);
    sup = std::max(sup, v);
    inf = std::min(inf, v);
  }
  const GreenScale &g = model.scale();
  out.ratio = sup / inf;
  out.bound = (g.c * g.cD) * (g.c * g.cD);
  out.pass = out.ratio <= out.bound;
  return out;
}

EmpiricalHarnack empirical_harnack_constant(const ProcessModel &model, const Point &x0, double R,
                                            const HarnackConstants &constants, int n_extreme,
                                            std::optional<double> inner_fraction, int grid_n) {
  if (model.kind() != ProcessKind::Stable)
    throw DomainError("empirical_harnack_constant needs a stable model");
  const double f = inner_fraction.value_or(constants.alpha * constants.alpha);
  if (!(f > 0.0 && f < 1.0))
    throw ConfigError("inner fraction must lie in (0, 1)");
  const auto family = pole_family(model, Ball(x0, kNeighbourhoodMargin * R), n_extreme);
  const std::vector<Point> grid = inner_grid(Ball(x0, f * R), grid_n);
  EmpiricalHarnack out;
  for (const HarmonicFunction &h : family) {
    double sup = 0.0, inf = kInfinity;
    for (const Point &p : grid) {
      const double v = h.evaluate(p);
      sup = std::max(sup, v);
      inf = std::min(inf, v);
    }
    if (inf > kVanishingLevel && sup / inf > out.constant) {
      out.constant = sup / inf;
      out.pole = h.pole_point();
    }
  }
  return out;
}

} // namespace hl
