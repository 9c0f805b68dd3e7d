#pragma once

#include "point.hpp"

#include <functional>
#include <string_view>

namespace hl::quad {

using Integrand = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod on a finite interval. Throws NumericalError when the
// error estimate exceeds rel_tol times the L1 norm of the integrand.
Result integrate(const Integrand &f, double a, double b, double rel_tol, std::string_view what);

// Integral of f(rho) over [rho1, rho2] with radius <= rho1 and rho2 possibly
// infinite. f may behave like (rho - radius)^(-alpha/2) near the sphere and
// like rho^(-1-alpha) at infinity (stable exit densities after angular
// integration); both are removed by substitution.
Result integrate_exterior_radial(const Integrand &f, double radius, double rho1, double rho2,
                                 double alpha, double rel_tol, std::string_view what);

// Integral over the directions w in S^{d-1} with angle(w, axis) <= half_angle
// of f(w) dsigma(w), for d in {1, 2, 3}. In d = 1 the "cap" is {axis} or
// {axis, -axis} when half_angle >= pi.
Result integrate_cap(int dim, const std::function<double(const Point &)> &f, const Point &axis,
                     double half_angle, double rel_tol, std::string_view what);

// Surface area of the unit sphere S^{d-1}.
double unit_sphere_area(int dim);

// Volume of the unit ball in R^d.
double unit_ball_volume(int dim);

} // namespace hl::quad
