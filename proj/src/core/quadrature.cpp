#include "quadrature.hpp"

#include "errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hl::quad {

namespace {

constexpr unsigned kMaxDepth = 24;
constexpr double kSphereOffset = 1e-6;

[[noreturn]] void fail(std::string_view what, double a, double b, double value, double error,
                       double l1) {
  std::ostringstream os;
  os.precision(6);
  os << "quadrature did not converge for " << what << " on [" << a << ", " << b
     << "]: value " << value << ", error estimate " << error << ", L1 " << l1;
  throw NumericalError(os.str());
}

// Two unit vectors orthogonal to axis (3-d only).
void orthonormal_frame(const Point &axis, Point &e2, Point &e3) {
  Point helper = std::abs(axis[0]) < 0.9 ? unit_vector(3, 0) : unit_vector(3, 1);
  e2 = helper - axis * dot(helper, axis);
  e2 *= 1.0 / e2.norm();
  e3 = Point{axis[1] * e2[2] - axis[2] * e2[1], axis[2] * e2[0] - axis[0] * e2[2],
             axis[0] * e2[1] - axis[1] * e2[0]};
}

} // namespace

Result integrate(const Integrand &f, double a, double b, double rel_tol, std::string_view what) {
  if (a == b)
    return {};
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, kMaxDepth, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > rel_tol * std::max(l1, 1e-300))
    fail(what, a, b, value, error, l1);
  return {value, error};
}

Result integrate_exterior_radial(const Integrand &f, double radius, double rho1, double rho2,
                                 double alpha, double rel_tol, std::string_view what) {
  if (!(rho1 >= radius) || !(rho2 >= rho1))
    throw DomainError("exterior radial integral needs radius <= rho1 <= rho2");
  Result total;
  const double split = std::min(2.0 * radius, rho2);

  // Near the sphere: rho = radius + v^q removes (rho - radius)^(-alpha/2).
  if (rho1 < split) {
    const double q = 1.0 / (1.0 - 0.5 * std::min(alpha, 1.999));
    const double v1 = std::pow(rho1 - radius, 1.0 / q);
    const double v2 = std::pow(split - radius, 1.0 / q);
    // Below s = 1e-6 radius the point z no longer resolves |z| - radius to
    // the quadrature tolerance; g is smooth in v there, so hold it constant.
    const double v_floor = std::min(std::pow(kSphereOffset * radius, 1.0 / q), v2);
    auto g = [&](double v) {
      const double s = std::pow(v, q);
      return f(radius + s) * q * s / v;
    };
    Result r = integrate(g, std::max(v1, v_floor), v2, rel_tol, what);
    if (v1 < v_floor)
      r.value += g(v_floor) * (v_floor - v1);
    total.value += r.value;
    total.error += r.error;
  }

  // Tail: rho = a t^(-1/alpha) turns rho^(-1-alpha) d rho into a bounded weight.
  const double a = std::max(split, rho1);
  if (rho2 > a) {
    const double t_lo = std::isinf(rho2) ? 0.0 : std::pow(a / rho2, alpha);
    auto g = [&](double t) {
      if (t <= 0.0)
        return 0.0;
      const double rho = a * std::pow(t, -1.0 / alpha);
      return f(rho) * rho / (alpha * t);
    };
    const Result r = integrate(g, t_lo, 1.0, rel_tol, what);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

Result integrate_cap(int dim, const std::function<double(const Point &)> &f, const Point &axis,
                     double half_angle, double rel_tol, std::string_view what) {
  constexpr double pi = std::numbers::pi;
  half_angle = std::clamp(half_angle, 0.0, pi);
  if (dim == 1) {
    double v = f(axis);
    if (half_angle >= pi)
      v += f(axis * -1.0);
    return {v, 0.0};
  }
  if (dim == 2) {
    auto g = [&](double phi) {
      const double c = std::cos(phi), s = std::sin(phi);
      return f(Point{c * axis[0] - s * axis[1], s * axis[0] + c * axis[1]});
    };
    return integrate(g, -half_angle, half_angle, rel_tol, what);
  }
  if (dim == 3) {
    Point e2, e3;
    orthonormal_frame(axis, e2, e3);
    auto outer = [&](double theta) {
      const double st = std::sin(theta), ct = std::cos(theta);
      if (st == 0.0)
        return 0.0;
      auto inner = [&](double phi) {
        return f(axis * ct + e2 * (st * std::cos(phi)) + e3 * (st * std::sin(phi)));
      };
      return st * integrate(inner, 0.0, 2.0 * pi, 0.1 * rel_tol, what).value;
    };
    return integrate(outer, 0.0, half_angle, rel_tol, what);
  }
  throw DomainError("angular cap integration is implemented for d <= 3");
}

double unit_sphere_area(int dim) {
  const double h = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double unit_ball_volume(int dim) { return unit_sphere_area(dim) / dim; }

} // namespace hl::quad
