#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Radial scale g with G comparable to g(|x - y|):
//   c^-1 g(|x-y|) <= G(x,y) <= c g(|x-y|),
//   g(r/2) <= cD g(r)  and  g(r) <= eta0 g(alpha0 r)  for 0 < r < R0.
struct GreenScale {
  std::function<double(double)> evaluator;
  double R0 = kInfinity;
  double cD = 2.0;
  double alpha0 = 0.5;
  double eta0 = 0.5;
  double c = 1.0;
  // Evaluator is continuous on (0, R0); required by invert().
  bool continuous = true;
  std::string label;

  double operator()(double r) const { return evaluator(r); }
};

// g(r) = amplitude * r^-exponent with the sharp constants cD = 2^p,
// alpha0 = 1/2, eta0 = 2^-p.
GreenScale power_law_scale(double amplitude, double exponent, std::string label = {});

// Piecewise log-log linear scale through (radius, value) rows; below the first
// radius the first segment is extended, R0 is the last radius. Doubling and
// decay constants are measured on the table.
GreenScale tabulated_scale(std::vector<double> radii, std::vector<double> values,
                           std::string label = {});

// Two-column text file "radius value"; '#' starts a comment. Parse errors
// carry the line number.
GreenScale load_scale_file(const std::string &path);
GreenScale parse_scale_table(std::istream &in, const std::string &source);

enum class ScaleInvariant { Decreasing, Doubling, Decay, SingularAtZero };

std::string to_string(ScaleInvariant inv);

struct ScaleViolation {
  ScaleInvariant invariant;
  double radius;
  double lhs;
  double rhs;
};

struct ValidationReport {
  std::vector<ScaleViolation> violations;
  std::size_t grid_size = 0;

  bool valid() const { return violations.empty(); }
  std::size_t count(ScaleInvariant inv) const;
};

// n log-spaced radii in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);
// 256 log-spaced radii in (2^-20, 1) scaled into (0, R0).
std::vector<double> default_grid(const GreenScale &scale);

// Doubling and decay are checked with this relative slack, which absorbs
// rounding when they hold with equality (power laws).
inline constexpr double kScaleCheckTolerance = 1e-12;

ValidationReport verify_scale(const GreenScale &scale, std::span<const double> grid);

// sup over the grid of g(r/2) / g(r).
double measured_doubling_constant(const GreenScale &scale, std::span<const double> grid);

struct DecayChoice {
  int m;
  double alpha;
};

// alpha = alpha0^m for the smallest m >= 1 with eta0^m <= eta.
DecayChoice decay_alpha(const GreenScale &scale, double eta);

// Continuous version equal to g on the dyadic nodes 2^n (or 2^-n R0) and
// affine in r between them.
GreenScale regularize(const GreenScale &scale);

inline constexpr double kInvertTolerance = 1e-12;
inline constexpr int kInvertMaxIterations = 200;

// r in (0, R0) with |g(r) - v| <= tol * v.
double invert(const GreenScale &scale, double v, double rel_tol = kInvertTolerance);

} // namespace hl
