#pragma once

#include "point.hpp"
#include "scale.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace hl {

enum class ProcessKind { Brownian, Stable, Tabulated };

std::string to_string(ProcessKind kind);

// A rotation-invariant process on R^d with closed-form potential kernels.
//
// Normalizations: G is the exact Riesz kernel A |x-y|^(alpha-d) for the
// isotropic alpha-stable process with symbol |xi|^alpha, and the Newtonian
// kernel for Brownian motion with generator Laplacian (alpha = 2). Hence the
// comparison constant c equals 1. A stable model with d <= alpha is recurrent:
// it has exit laws and a ball Green function but no global Green function.
class ProcessModel {
public:
  static ProcessModel brownian(int dim);
  static ProcessModel stable(int dim, double alpha);
  static ProcessModel tabulated(int dim, GreenScale scale);

  ProcessKind kind() const { return kind_; }
  int dim() const { return dim_; }
  // Stability index; 2 for Brownian motion, 0 for tabulated models.
  double alpha() const { return alpha_; }
  bool has_green() const { return scale_.has_value(); }
  bool has_jumps() const { return kind_ == ProcessKind::Stable; }
  std::string name() const;

  // Throws DomainError for recurrent models.
  const GreenScale &scale() const;
  // A in G = A r^(alpha-d); throws for tabulated and recurrent models.
  double green_constant() const;

  double green(const Point &x, const Point &y) const;

  // Stable: density of the exit position from `ball` started at x, at the
  // exterior point z (Lebesgue density). Brownian: density of the exit
  // position w.r.t. surface measure, z on the sphere.
  double poisson_kernel(const Ball &ball, const Point &x, const Point &z) const;

  // Green function of the process killed on leaving `ball` (0 outside).
  double ball_green(const Ball &ball, const Point &x, const Point &y) const;

  // Jump intensity n(x, z) = A_nu |x - z|^(-d-alpha).
  double levy_density(const Point &x, const Point &z) const;
  double levy_normalization() const;
  // sup { n0(s) / n0(r) : 0 < r < s < 2r } measured on a log grid, floored
  // at 1. Equals 1 for the decreasing power law.
  double weak_decreasing_constant() const;
  // sup { n0(r) / n0(s) : 0 < r < s < 2r } = 2^(d+alpha) for the power law.
  double levy_doubling_constant() const;

private:
  ProcessModel() = default;
  void require_kind(ProcessKind kind, const char *op) const;
  void check_point(const Point &p, const char *what) const;

  ProcessKind kind_ = ProcessKind::Stable;
  int dim_ = 3;
  double alpha_ = 1.0;
  double green_constant_ = 0.0;
  std::optional<GreenScale> scale_;
};

// Riesz constant A(d, alpha) = Gamma((d-alpha)/2) / (2^alpha pi^(d/2) Gamma(alpha/2)),
// and for alpha = 2 the Newtonian constant Gamma(d/2 - 1) / (4 pi^(d/2)).
double riesz_constant(int dim, double alpha);

// C(d, alpha) = Gamma(d/2) pi^(-d/2-1) sin(pi alpha / 2).
double stable_poisson_constant(int dim, double alpha);

// One-dimensional integral in the ball Green function,
//   int_0^w s^(alpha/2 - 1) (1 + s)^(-d/2) ds, by quadrature.
double ball_green_integral(int dim, double alpha, double w);

struct TriangleEstimate {
  double constant = 1.0;
  Point x, y, z;
};

// max over sampled triples in `region` of min(G(x,z), G(y,z)) / G(x,y).
TriangleEstimate triangle_constant(const ProcessModel &model, long n_triples, const Ball &region,
                                   std::uint64_t seed);

} // namespace hl
