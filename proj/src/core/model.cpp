#include "model.hpp"

#include "errors.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hl {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kBallGreenTolerance = 1e-10;

} // namespace

std::string to_string(ProcessKind kind) {
  switch (kind) {
  case ProcessKind::Brownian:
    return "brownian";
  case ProcessKind::Stable:
    return "stable";
  case ProcessKind::Tabulated:
    return "tabulated";
  }
  return "unknown";
}

double riesz_constant(int dim, double alpha) {
  const double d = dim;
  if (alpha == 2.0)
    return std::tgamma(0.5 * d - 1.0) / (4.0 * std::pow(pi, 0.5 * d));
  return std::tgamma(0.5 * (d - alpha)) /
         (std::exp2(alpha) * std::pow(pi, 0.5 * d) * std::tgamma(0.5 * alpha));
}

double stable_poisson_constant(int dim, double alpha) {
  const double d = dim;
  return std::tgamma(0.5 * d) * std::pow(pi, -0.5 * d - 1.0) * std::sin(0.5 * pi * alpha);
}

ProcessModel ProcessModel::brownian(int dim) {
  if (dim < 3 || dim > kMaxDim)
    throw ConfigError("Brownian model needs 3 <= d <= " + std::to_string(kMaxDim));
  ProcessModel m;
  m.kind_ = ProcessKind::Brownian;
  m.dim_ = dim;
  m.alpha_ = 2.0;
  m.green_constant_ = riesz_constant(dim, 2.0);
  m.scale_ = power_law_scale(m.green_constant_, dim - 2.0, m.name());
  return m;
}

ProcessModel ProcessModel::stable(int dim, double alpha) {
  if (dim < 1 || dim > kMaxDim)
    throw ConfigError("stable model needs 1 <= d <= " + std::to_string(kMaxDim));
  if (!(alpha > 0.0 && alpha < 2.0))
    throw ConfigError("stable model needs 0 < alpha < 2");
  ProcessModel m;
  m.kind_ = ProcessKind::Stable;
  m.dim_ = dim;
  m.alpha_ = alpha;
  if (dim > alpha) {
    m.green_constant_ = riesz_constant(dim, alpha);
    m.scale_ = power_law_scale(m.green_constant_, dim - alpha, m.name());
  }
  return m;
}

ProcessModel ProcessModel::tabulated(int dim, GreenScale scale) {
  if (dim < 1 || dim > kMaxDim)
    throw ConfigError("tabulated model needs 1 <= d <= " + std::to_string(kMaxDim));
  ProcessModel m;
  m.kind_ = ProcessKind::Tabulated;
  m.dim_ = dim;
  m.alpha_ = 0.0;
  m.scale_ = std::move(scale);
  return m;
}

std::string ProcessModel::name() const {
  switch (kind_) {
  case ProcessKind::Brownian:
    return "brownian(d=" + std::to_string(dim_) + ")";
  case ProcessKind::Stable: {
    std::string a = std::to_string(alpha_);
    a.erase(a.find_last_not_of('0') + 1);
    if (a.back() == '.')
      a.pop_back();
    return "stable(d=" + std::to_string(dim_) + ", alpha=" + a + ")";
  }
  case ProcessKind::Tabulated:
    return "tabulated(d=" + std::to_string(dim_) + ")";
  }
  return "unknown";
}

const GreenScale &ProcessModel::scale() const {
  if (!scale_)
    throw DomainError(name() + " is recurrent (d <= alpha): no Green function");
  return *scale_;
}

double ProcessModel::green_constant() const {
  if (kind_ == ProcessKind::Tabulated)
    throw DomainError("tabulated models have no closed-form Green constant");
  if (!scale_)
    throw DomainError(name() + " is recurrent (d <= alpha): no Green function");
  return green_constant_;
}

void ProcessModel::require_kind(ProcessKind kind, const char *op) const {
  if (kind_ != kind)
    throw DomainError(std::string(op) + " is not available for " + name());
}

void ProcessModel::check_point(const Point &p, const char *what) const {
  if (p.dim() != dim_)
    throw DomainError(std::string(what) + " has dimension " + std::to_string(p.dim()) +
                      ", model has " + std::to_string(dim_));
}

double ProcessModel::green(const Point &x, const Point &y) const {
  check_point(x, "x");
  check_point(y, "y");
  const GreenScale &g = scale();
  const double r = distance(x, y);
  if (r == 0.0)
    return kInfinity;
  return g(r);
}

double ProcessModel::poisson_kernel(const Ball &ball, const Point &x, const Point &z) const {
  check_point(x, "x");
  check_point(z, "z");
  const double rx = distance(x, ball.center);
  const double rz = distance(z, ball.center);
  const double r = ball.radius;
  if (!(rx < r))
    throw DomainError("poisson_kernel: x = " + x.to_string() + " is not inside the ball");
  if (kind_ == ProcessKind::Brownian) {
    if (std::abs(rz - r) > 1e-9 * r)
      throw DomainError("poisson_kernel: Brownian exit points lie on the sphere");
    return (r * r - rx * rx) /
           (quad::unit_sphere_area(dim_) * r * std::pow(distance(x, z), dim_));
  }
  require_kind(ProcessKind::Stable, "poisson_kernel");
  if (!(rz > r))
    throw DomainError("poisson_kernel: z = " + z.to_string() + " is not outside the ball");
  const double ratio = (r - rx) * (r + rx) / ((rz - r) * (rz + r));
  return stable_poisson_constant(dim_, alpha_) * std::pow(ratio, 0.5 * alpha_) *
         std::pow(distance(x, z), -static_cast<double>(dim_));
}

double ball_green_integral(int dim, double alpha, double w) {
  if (!(w >= 0.0))
    throw DomainError("ball_green_integral needs w >= 0");
  if (w == 0.0)
    return 0.0;
  const double a = 0.5 * alpha;
  const double b = 0.5 * (dim - alpha);
  const double h = 0.5 * dim;
  double total = 0.0;

  // int_0^min(w,1) s^(a-1) (1+s)^(-d/2) ds with s = v^(1/a).
  const double upper = std::pow(std::min(w, 1.0), a);
  total += quad::integrate(
               [&](double v) { return std::pow(1.0 + std::pow(v, 1.0 / a), -h) / a; }, 0.0,
               upper, kBallGreenTolerance, "ball Green integral near 0")
               .value;
  if (w > 1.0) {
    // int_1^w ... ds = int_{1/w}^1 t^(b-1) (1+t)^(-d/2) dt.
    if (b > 0.0) {
      total += quad::integrate(
                   [&](double u) { return std::pow(1.0 + std::pow(u, 1.0 / b), -h) / b; },
                   std::pow(w, -b), 1.0, kBallGreenTolerance, "ball Green integral tail")
                   .value;
    } else {
      total += quad::integrate(
                   [&](double y) {
                     const double t = std::exp(-y);
                     return std::pow(t, b) * std::pow(1.0 + t, -h);
                   },
                   0.0, std::log(w), kBallGreenTolerance, "ball Green integral tail")
                   .value;
    }
  }
  return total;
}

double ProcessModel::ball_green(const Ball &ball, const Point &x, const Point &y) const {
  check_point(x, "x");
  check_point(y, "y");
  if (kind_ == ProcessKind::Tabulated)
    throw DomainError("ball_green is not available for tabulated models");
  const double r = ball.radius;
  const double rx = distance(x, ball.center);
  const double ry = distance(y, ball.center);
  if (!(rx < r) || !(ry < r))
    return 0.0;
  const double dxy = distance(x, y);
  if (dxy == 0.0)
    return kInfinity;
  const double d = dim_;
  const double kappa = std::tgamma(0.5 * d) /
                       (std::exp2(alpha_) * std::pow(pi, 0.5 * d) *
                        std::pow(std::tgamma(0.5 * alpha_), 2));
  const double w = (r - rx) * (r + rx) * (r - ry) * (r + ry) / (r * r * dxy * dxy);
  return kappa * std::pow(dxy, alpha_ - d) * ball_green_integral(dim_, alpha_, w);
}

double ProcessModel::levy_normalization() const {
  require_kind(ProcessKind::Stable, "levy_normalization");
  const double d = dim_;
  return alpha_ * std::exp2(alpha_ - 1.0) * std::tgamma(0.5 * (d + alpha_)) /
         (std::pow(pi, 0.5 * d) * std::tgamma(1.0 - 0.5 * alpha_));
}

double ProcessModel::levy_density(const Point &x, const Point &z) const {
  check_point(x, "x");
  check_point(z, "z");
  require_kind(ProcessKind::Stable, "levy_density");
  const double r = distance(x, z);
  if (r == 0.0)
    throw DomainError("levy_density: x and z coincide");
  return levy_normalization() * std::pow(r, -dim_ - alpha_);
}

double ProcessModel::weak_decreasing_constant() const {
  require_kind(ProcessKind::Stable, "weak_decreasing_constant");
  const Point origin(dim_);
  double c0 = 0.0;
  for (double r : log_grid(1e-3, 1e3, 61)) {
    for (double t : log_grid(1.0 + 1e-6, 2.0 - 1e-6, 33)) {
      const double n_r = levy_density(origin, unit_vector(dim_, 0) * r);
      const double n_s = levy_density(origin, unit_vector(dim_, 0) * (r * t));
      c0 = std::max(c0, n_s / n_r);
    }
  }
  return std::max(c0, 1.0);
}

double ProcessModel::levy_doubling_constant() const {
  require_kind(ProcessKind::Stable, "levy_doubling_constant");
  const Point origin(dim_);
  double c = 0.0;
  for (double r : log_grid(1e-3, 1e3, 61)) {
    const double n_r = levy_density(origin, unit_vector(dim_, 0) * r);
    const double n_2r = levy_density(origin, unit_vector(dim_, 0) * (2.0 * r));
    c = std::max(c, n_r / n_2r);
  }
  return c;
}

TriangleEstimate triangle_constant(const ProcessModel &model, long n_triples, const Ball &region,
                                   std::uint64_t seed) {
  if (n_triples < 1)
    throw ConfigError("triangle_constant needs n_triples >= 1");
  TriangleEstimate best;
  best.x = best.y = best.z = region.center;
  for (long i = 0; i < n_triples; ++i) {
    SampleStream rng(seed, static_cast<std::uint64_t>(i));
    const Point x = rng.in_ball(region);
    const Point y = rng.in_ball(region);
    const Point z = rng.in_ball(region);
    const double gxy = model.green(x, y);
    const double ratio = std::min(model.green(x, z), model.green(y, z)) / gxy;
    if (ratio > best.constant)
      best = {ratio, x, y, z};
  }
  return best;
}

} // namespace hl
