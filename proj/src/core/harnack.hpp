#pragma once

#include "constants.hpp"
#include "model.hpp"
#include "montecarlo.hpp"
#include "point.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hl {

// Indicator of {z : rho_lo <= |z - c| < rho_hi, angle(z - c, axis) <= half_angle},
// c the centre of the ball, scaled by weight.
struct BoundaryCell {
  double rho_lo = 1.0;
  double rho_hi = kInfinity;
  Point axis;
  double half_angle = 3.141592653589793;
  double weight = 1.0;
};

enum class BoundaryKind { Constant, Cells, Pole };

// Bounded positive function on the complement of `ball`, extended inside by
// its exit-law average: h(x) = E^x[f(X at exit from ball)]. A pole is the
// extreme function x -> P_ball(x, z0).
class HarmonicFunction {
public:
  static HarmonicFunction constant(const ProcessModel &model, const Ball &ball, double value);
  static HarmonicFunction cells(const ProcessModel &model, const Ball &ball,
                                std::vector<BoundaryCell> cells, std::string label = {});
  static HarmonicFunction pole(const ProcessModel &model, const Ball &ball, const Point &z0);

  const ProcessModel &model() const { return model_; }
  const Ball &ball() const { return ball_; }
  BoundaryKind kind() const { return kind_; }
  const std::string &label() const { return label_; }
  const Point &pole_point() const { return pole_; }

  // Quadrature inside the ball, boundary data outside (0 for poles).
  double evaluate(const Point &x) const;
  double boundary_value(const Point &z) const;

private:
  HarmonicFunction(const ProcessModel &model, const Ball &ball) : model_(model), ball_(ball) {}

  ProcessModel model_;
  Ball ball_;
  BoundaryKind kind_ = BoundaryKind::Constant;
  double value_ = 1.0;
  std::vector<BoundaryCell> cells_;
  Point pole_;
  std::string label_;
};

inline constexpr double kHarmonicTolerance = 1e-8;

struct MeanValueResult {
  double h_x = 0.0;
  EstimateWithError mc;
  double jump_term = 0.0; // pole mass reached directly from x (poles only)
  double residual = 0.0;  // (mc.mean + jump_term - h_x) / mc.std_error
};

// Compares h(x) with the average of h over n exits from `inner`.
MeanValueResult mean_value_check(const HarmonicFunction &h, const Ball &inner, const Point &x,
                                 std::int64_t n, std::uint64_t seed, int threads = 1);

// Deterministic grid of B(center, radius): the centre plus n Halton points.
std::vector<Point> inner_grid(const Ball &ball, int n);

// Pole family on the complement of `ball`: radii ball.radius * (1 + s) with
// s log-spaced in [1e-3, 1e2], crossed with directions (d = 1: both sides;
// d >= 2: Halton directions).
std::vector<HarmonicFunction> pole_family(const ProcessModel &model, const Ball &ball, int count);

struct RatioRow {
  std::string label;
  double sup = 0.0;
  double inf = 0.0;
  double ratio = 0.0;
  bool vanishing = false;
};

struct HarnackRatioResult {
  std::vector<RatioRow> rows;
  double max_ratio = 0.0;
  int argmax = -1;
  double K = 0.0;
  double inner_radius = 0.0;
  int excluded = 0;
  bool pass = false;
};

inline constexpr double kNeighbourhoodMargin = 1.05;
inline constexpr double kVanishingLevel = 1e-300;

// sup/inf of each family member over inner_grid(B(x0, alpha^2 R), grid_n);
// pass iff every ratio is at most K.
HarnackRatioResult harnack_ratio(const Point &x0, double R, const HarnackConstants &constants,
                                 const std::vector<HarmonicFunction> &family, int grid_n,
                                 int threads = 1);

struct DiffusionCheck {
  double ratio = 0.0;
  double bound = 0.0; // (c cD)^2
  bool pass = false;
};

// sup/inf of G(., z_far) over a grid of B(x0, R/2).
DiffusionCheck diffusion_global_check(const ProcessModel &model, const Point &x0, double R,
                                      const Point &z_far, int grid_n = 4096);

struct EmpiricalHarnack {
  double constant = 0.0;
  Point pole;
};

// Largest sup/inf over B(x0, inner_fraction R) among n_extreme poles outside
// B(x0, 1.05 R); inner_fraction defaults to alpha^2.
EmpiricalHarnack empirical_harnack_constant(const ProcessModel &model, const Point &x0, double R,
                                            const HarnackConstants &constants, int n_extreme,
                                            std::optional<double> inner_fraction = {},
                                            int grid_n = 4096);

} // namespace hl
