#include "sampling.hpp"

#include "errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hl {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer applied twice so nearby (seed, index) pairs decorrelate.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ index);
}

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

double radical_inverse(int base, std::uint64_t i) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

Point halton_direction(int dim, std::uint64_t i, int first_prime) {
  Point p(dim);
  auto u = [&](int k) { return radical_inverse(kPrimes[first_prime + k], i + 1); };
  switch (dim) {
  case 1:
    p[0] = u(0) < 0.5 ? -1.0 : 1.0;
    return p;
  case 2: {
    const double phi = 2.0 * std::numbers::pi * u(0);
    p[0] = std::cos(phi);
    p[1] = std::sin(phi);
    return p;
  }
  case 3: {
    const double z = 2.0 * u(0) - 1.0;
    const double phi = 2.0 * std::numbers::pi * u(1);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    p[0] = s * std::cos(phi);
    p[1] = s * std::sin(phi);
    p[2] = z;
    return p;
  }
  default:
    for (int k = 0; k < dim; ++k)
      p[k] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u(k) - 1.0);
    p *= 1.0 / p.norm();
    return p;
  }
}

Point halton_in_ball(const Ball &ball, std::uint64_t i) {
  const int d = ball.dim();
  const double r = ball.radius * std::pow(radical_inverse(2, i + 1), 1.0 / d);
  return ball.center + halton_direction(d, i, 1) * r;
}

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index)
    : engine_(mix_seed(seed, index)) {}

double SampleStream::uniform() {
  // 53 random bits, shifted off zero.
  return ((engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double SampleStream::normal() { return std::normal_distribution<double>()(engine_); }

double SampleStream::gamma(double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

double SampleStream::beta(double a, double b) {
  for (;;) {
    const double x = gamma(a);
    const double y = gamma(b);
    if (x + y > 0.0)
      return x / (x + y);
  }
}

Point SampleStream::direction(int dim) {
  Point p(dim);
  if (dim == 1) {
    p[0] = uniform() < 0.5 ? -1.0 : 1.0;
    return p;
  }
  for (;;) {
    for (int i = 0; i < dim; ++i)
      p[i] = normal();
    const double n = p.norm();
    if (n > 0.0) {
      p *= 1.0 / n;
      return p;
    }
  }
}

Point SampleStream::in_ball(const Ball &ball) {
  const int d = ball.dim();
  const double r = ball.radius * std::pow(uniform(), 1.0 / d);
  return ball.center + direction(d) * r;
}

Point sample_centered_exit(const ProcessModel &model, const Point &center, double radius,
                           SampleStream &rng) {
  const int d = model.dim();
  switch (model.kind()) {
  case ProcessKind::Stable: {
    const double a = 0.5 * model.alpha();
    const double u = rng.beta(a, 1.0 - a);
    return center + rng.direction(d) * (radius / std::sqrt(u));
  }
  case ProcessKind::Brownian:
    return center + rng.direction(d) * radius;
  case ProcessKind::Tabulated:
    break;
  }
  throw DomainError("exit laws are not available for " + model.name());
}

namespace {

// Off-centre Brownian exit from B(c, R) started at x.
Point brownian_offcenter_exit(const Ball &ball, const Point &x, SampleStream &rng) {
  const int d = ball.dim();
  const Point rel = x - ball.center;
  const double a = rel.norm() / ball.radius;
  const Point e = rel * (1.0 / rel.norm());
  if (d == 3) {
    // Closed-form inverse CDF of cos(theta) between z - c and x - c.
    const double u = rng.uniform();
    const double w = 1.0 / (1.0 - a) - 2.0 * a * u / (1.0 - a * a);
    double t = (1.0 + a * a - 1.0 / (w * w)) / (2.0 * a);
    t = std::clamp(t, -1.0, 1.0);
    Point v = rng.direction(d);
    v -= e * dot(v, e);
    const double vn = v.norm();
    if (vn == 0.0)
      return ball.center + e * ball.radius;
    v *= 1.0 / vn;
    return ball.center + (e * t + v * std::sqrt(1.0 - t * t)) * ball.radius;
  }
  // Rejection from the uniform law: the kernel ratio to its maximum is
  // ((1 - a) / |x/R - zeta|)^d.
  const Point xs = rel * (1.0 / ball.radius);
  for (;;) {
    const Point zeta = rng.direction(d);
    const double q = (1.0 - a) / distance(xs, zeta);
    if (rng.uniform() <= std::pow(q, d))
      return ball.center + zeta * ball.radius;
  }
}

} // namespace

ExitSample sample_exit(const ProcessModel &model, const Ball &ball, const Point &x,
                       SampleStream &rng) {
  if (x.dim() != model.dim() || ball.dim() != model.dim())
    throw DomainError("sample_exit: dimension mismatch");
  const double rx = distance(x, ball.center);
  if (!(rx < ball.radius))
    throw DomainError("sample_exit: x = " + x.to_string() + " is not inside the ball");
  if (model.kind() == ProcessKind::Brownian) {
    if (rx == 0.0)
      return {sample_centered_exit(model, x, ball.radius, rng), 1};
    return {brownian_offcenter_exit(ball, x, rng), 1};
  }
  if (model.kind() != ProcessKind::Stable)
    throw DomainError("exit laws are not available for " + model.name());
  Point p = x;
  for (int step = 1; step <= kMaxExitSteps; ++step) {
    const double depth = ball.radius - distance(p, ball.center);
    const Point z = sample_centered_exit(model, p, depth, rng);
    if (!(distance(z, ball.center) < ball.radius))
      return {z, step};
    p = z;
  }
  throw NumericalError("sample_exit: no exit after " + std::to_string(kMaxExitSteps) +
                       " inscribed-ball steps");
}

} // namespace hl
