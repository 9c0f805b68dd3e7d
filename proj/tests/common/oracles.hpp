#pragma once

// Closed forms used as test oracles. They are written from the formulas
// directly and do not call into the library.

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// A in G(x, y) = A |x - y|^(alpha - d).
inline double riesz(int d, double alpha) {
  using boost::math::tgamma;
  if (alpha == 2.0)
    return tgamma(d / 2.0 - 1.0) / (4.0 * std::pow(pi, d / 2.0));
  return tgamma((d - alpha) / 2.0) / (std::pow(2.0, alpha) * std::pow(pi, d / 2.0) * tgamma(alpha / 2.0));
}

// Capacity of B(0, r) for the Riesz kernel: the equilibrium density is
// proportional to (r^2 - |x|^2)^(-alpha/2).
inline double ball_capacity(int d, double alpha, double r) {
  using boost::math::beta;
  return beta(d / 2.0, 1.0 - alpha / 2.0) /
         (riesz(d, alpha) * beta(alpha / 2.0, 1.0 - alpha / 2.0)) * std::pow(r, d - alpha);
}

// Killed Green function of B(0, r) for the stable process, through the
// regularized incomplete beta function.
inline double stable_ball_green(int d, double alpha, double r, double rx, double ry, double dxy) {
  using boost::math::beta;
  using boost::math::ibeta;
  using boost::math::tgamma;
  const double kappa = tgamma(d / 2.0) /
                       (std::pow(2.0, alpha) * std::pow(pi, d / 2.0) * std::pow(tgamma(alpha / 2.0), 2));
  const double w = (r * r - rx * rx) * (r * r - ry * ry) / (r * r * dxy * dxy);
  const double a = alpha / 2.0, b = (d - alpha) / 2.0;
  return kappa * std::pow(dxy, alpha - d) * beta(a, b) * ibeta(a, b, w / (1.0 + w));
}

// Newtonian Green function of B(0, r) in R^3 by the Kelvin image:
// (1/4pi) (1/|x-y| - r / (|x| |y - x*|)), x* = r^2 x / |x|^2.
inline double brownian3_ball_green(const double *x, const double *y, double r) {
  double dxy = 0, nx = 0;
  for (int i = 0; i < 3; ++i) {
    dxy += (x[i] - y[i]) * (x[i] - y[i]);
    nx += x[i] * x[i];
  }
  dxy = std::sqrt(dxy);
  nx = std::sqrt(nx);
  if (nx == 0.0)
    return (1.0 / dxy - 1.0 / r) / (4.0 * pi);
  double d_img = 0;
  for (int i = 0; i < 3; ++i) {
    const double xs = r * r * x[i] / (nx * nx);
    d_img += (y[i] - xs) * (y[i] - xs);
  }
  return (1.0 / dxy - r / (nx * std::sqrt(d_img))) / (4.0 * pi);
}

// Cauchy process on the line, exit from (-1, 1) started at 0:
// density 1 / (pi |z| sqrt(z^2 - 1)); P[|Z| > t] = (2/pi) asin(1/t).
inline double cauchy_exit_density(double z) { return 1.0 / (pi * std::abs(z) * std::sqrt(z * z - 1.0)); }
inline double cauchy_exit_tail(double t) { return 2.0 / pi * std::asin(1.0 / t); }

// Isotropic alpha-stable process started at distance r from the centre of a
// ball of radius rho < r: P[ever hit the ball] = I_{rho^2/r^2}((d-alpha)/2, alpha/2).
inline double stable_ball_hitting(int d, double alpha, double rho, double r) {
  return boost::math::ibeta((d - alpha) / 2.0, alpha / 2.0, rho * rho / (r * r));
}

// Exit from B(0, 1) started at 0: P[|Z| > t] = I_{1/t^2}(alpha/2, 1 - alpha/2).
inline double stable_centered_exit_tail(double alpha, double t) {
  return boost::math::ibeta(alpha / 2.0, 1.0 - alpha / 2.0, 1.0 / (t * t));
}

// Brownian motion in R^d between spheres a < |x| < b: P[hit the inner sphere first].
inline double concentric_hitting(int d, double a, double b, double r) {
  const double p = 2.0 - d;
  return (std::pow(r, p) - std::pow(b, p)) / (std::pow(a, p) - std::pow(b, p));
}

} // namespace oracle
