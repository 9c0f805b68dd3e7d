#pragma once

#include "model.hpp"
#include "point.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hl {

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0; // sample standard deviation / sqrt(n)
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

// Mean and standard error of per-sample values, summed in index order.
EstimateWithError summarize(const std::vector<double> &values, std::uint64_t seed);

struct WosConfig {
  std::int64_t max_steps = 10000;
  // Stable walks use this fraction of the distance to the nearest boundary;
  // Brownian walks use the full distance.
  double boundary_shrink = 0.5;
  // Brownian walks stop within this fraction of the domain radius of a
  // boundary and count as having reached it.
  double epsilon_shell = 1e-6;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct HittingEstimate {
  EstimateWithError estimate;
  std::int64_t censored = 0;
  double censored_fraction = 0.0;
  bool censoring_warning = false; // censored_fraction > 1%
  double mean_steps = 0.0;
};

inline constexpr double kCensoringLimit = 0.01;

// P^x[T_target < tau_domain] for a target that is a finite union of balls,
// by walk-on-spheres with exact ball exits. Censored walks count as misses.
HittingEstimate hitting_probability(const ProcessModel &model, std::span<const Ball> target,
                                    const Ball &domain, const Point &x, std::int64_t n,
                                    const WosConfig &config);

// n exact exit positions from `ball` started at x (sample i uses stream i).
std::vector<Point> sample_exits(const ProcessModel &model, const Ball &ball, const Point &x,
                                std::int64_t n, std::uint64_t seed, int threads = 1);

struct CellComparison {
  std::string label;
  double expected = 0.0; // exact expected count under the direct law
  std::int64_t direct = 0;
  std::int64_t two_stage = 0;
  double z = 0.0;        // (direct - two_stage) / sqrt(direct + two_stage)
};

struct IteratedBalayageReport {
  std::vector<CellComparison> cells;
  double chi_square = 0.0;
  int dof = 0;
  double critical = 0.0; // 1% upper quantile
  double max_abs_z = 0.0; // over cells with expected >= 100
  bool pass = false;
  double mean_stages = 0.0;
};

inline constexpr double kSignificance = 0.01;

// Exit law from B(x, r_large) sampled directly and in two stages (exit
// B(x, r_small), then continue from the landing point until outside
// B(x, r_large)). Cells: n_radial equiprobable radial bins of the direct law
// times the two half-spaces along the first axis.
IteratedBalayageReport iterated_balayage_check(const ProcessModel &model, const Point &x,
                                               double r_small, double r_large, std::int64_t n,
                                               std::uint64_t seed, int n_radial = 10,
                                               int threads = 1);

struct JumpComparison {
  bool diffusion_trivial = false; // Brownian: the comparison is vacuous
  double c_J = 1.0;               // max(1, raw)
  double raw = 0.0;               // sup of the density ratio
  double grid_value = 0.0;        // before local refinement
  Point y, z;                     // attaining pair (z = far point when at infinity)
  bool at_infinity = false;       // sup approached as |z| -> infinity
  bool refinement_warning = false;
  double alpha_ratio = 0.0;
  double radius = 1.0;
  int n_y = 0, n_z = 0;
};

// sup over y in B(x, a r) (closure), z outside B(x, r) of
//   poisson_kernel(B(x, a r), x, z) / poisson_kernel(B(x, r), y, z),
// maximized on a (|y|, 1/|z|^2, angle) grid and refined locally.
JumpComparison jump_comparison_constant(const ProcessModel &model, double alpha_ratio, int n_y,
                                        int n_z, double radius = 1.0);

struct JumpCell {
  double rho_lo = 0.0, rho_hi = 0.0;
  int side = 1;
  double p_inner_exact = 0.0, p_inner_mc = 0.0, se_inner = 0.0;
  double p_outer_exact = 0.0, p_outer_mc = 0.0, se_outer = 0.0;
  bool agree = false;
};

struct JumpMonteCarlo {
  std::vector<JumpCell> cells;
  double max_empirical_ratio = 0.0; // over cells with both counts >= 100
  bool pass = false;
};

// Empirical exit laws from B(0, a r) started at 0 ("inner") and from
// B(0, r) started at y ("outer"), compared with exact quadrature on radial
// shells outside B(0, r) times the two half-spaces along y's axis. Stable,
// d <= 3.
JumpMonteCarlo jump_comparison_mc(const ProcessModel &model, double alpha_ratio, const Point &y,
                                  std::int64_t n, std::uint64_t seed, int threads = 1);

struct LevyConditions {
  double nxy_sup = 0.0; // sup n(x, z) / n(y, z) over |x - z| >= |y - z|
  bool nxy_pass = false;
  double C0 = 0.0;         // weak_decreasing_constant
  double doubling = 0.0;   // levy_doubling_constant, 2^(d+alpha)
  double half_distance_ratio = 0.0; // y the midpoint of [x, z]
  int samples = 0;
};

LevyConditions check_levy_conditions(const ProcessModel &model, double C, double a, int grid_n);

} // namespace hl
