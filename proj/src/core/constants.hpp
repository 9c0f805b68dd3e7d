#pragma once

#include "scale.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hl {

struct ConstantInputs {
  double c = 1.0;
  double cD = 2.0;
  double c0 = 1.0;
  double cJ = 1.0;
  double alpha0 = 0.5;
  double eta0 = 0.5;
  double R0 = kInfinity;
  double R1 = kInfinity;
};

struct HarnackConstants {
  double eta = 0.0;
  double alpha = 0.0;
  int alpha_exponent = 0; // alpha = alpha0^alpha_exponent
  double beta = 0.0;
  double gamma = 0.0;
  double kappa = 0.0;
  std::int64_t j0 = 0;
  int m0 = 0;
  int m1 = 0;
  double K = 0.0;
  ConstantInputs inputs;
};

inline constexpr int kMaxAlphaHalvings = 60;

// The constant pipeline. alpha is the largest alpha0^m < 1/4 with
// g(r) <= c cD^-1 eta g(alpha r) on `grid` (default_grid when empty); j0, m0,
// m1 are the least integers with (1+beta)^j0 > cD, 2^m0 > 2 j0,
// 2^m1 alpha^2 > 1.
HarnackConstants build_constants(const GreenScale &scale, double c0, double cJ, double R1,
                                 std::span<const double> grid = {});

// Least j with (1 + beta)^j > cD.
std::int64_t least_j0(double beta, double cD);

// Radii r_j, j = 1..j_max, with g(r_j) = cD^m0 (1+beta)^(j-1) g(alpha^4 R).
std::vector<double> radii_sequence(const GreenScale &scale, const HarnackConstants &k, double R,
                                   std::int64_t j_max);

struct SumCheck {
  double sum = 0.0;   // sum of r_j for j <= j_max
  double tail = 0.0;  // envelope for the remaining blocks
  double bound = 0.0; // alpha^4 R
  std::int64_t j_max = 0;
  // Blocks j = m j0 + k with r_j > 2^-(m0+m) alpha^4 R (relative 1e-12).
  std::int64_t envelope_violations = 0;
  bool pass = false;
};

// Partial sum plus the block envelope sum_{m >= m*} j0 2^-(m0+m) alpha^4 R,
// m* = floor(j_max / j0). j_max defaults to 10 j0 when 0.
SumCheck check_sum_rj(const GreenScale &scale, const HarnackConstants &k, double R,
                      std::int64_t j_max = 0);

} // namespace hl
