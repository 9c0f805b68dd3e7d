#include "constants.hpp"

#include "errors.hpp"

#include <cmath>

namespace hl {

std::int64_t least_j0(double beta, double cD) {
  if (!(beta > 0.0) || !(cD > 1.0))
    throw DomainError("least_j0 needs beta > 0 and cD > 1");
  const long double step = std::log1p(static_cast<long double>(beta));
  const long double target = std::log(static_cast<long double>(cD));
  auto exceeds = [&](std::int64_t j) { return static_cast<long double>(j) * step > target; };
  std::int64_t j = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(target / step)) - 1);
  while (j > 1 && exceeds(j - 1))
    --j;
  while (!exceeds(j))
    ++j;
  return j;
}

HarnackConstants build_constants(const GreenScale &scale, double c0, double cJ, double R1,
                                 std::span<const double> grid) {
  if (!(c0 >= 1.0))
    throw DomainError("build_constants needs c0 >= 1");
  if (!(cJ > 0.0))
    throw DomainError("build_constants needs cJ > 0");
  if (!(R1 > 0.0))
    throw DomainError("build_constants needs R1 > 0");

  HarnackConstants k;
  k.inputs = {scale.c, scale.cD, c0, cJ, scale.alpha0, scale.eta0, scale.R0, R1};
  const double c = scale.c;
  const double cD = scale.cD;

  // Inverses are exact products; each constant is then one rounding away.
  const double eta_inv = 2.0 * c * c * c * cD * cD;
  const double beta_inv = 6.0 * c0 * eta_inv;
  const double gamma_inv = std::max(6.0, cJ * beta_inv);
  const double kappa_inv = beta_inv * gamma_inv / 3.0;
  k.eta = 1.0 / eta_inv;
  k.beta = 1.0 / beta_inv;
  k.gamma = 1.0 / gamma_inv;
  k.kappa = 1.0 / kappa_inv;

  std::vector<double> own_grid;
  if (grid.empty()) {
    own_grid = default_grid(scale);
    grid = own_grid;
  }
  const double factor = c / cD * k.eta;
  for (int m = 1; m <= kMaxAlphaHalvings; ++m) {
    const double a = std::pow(scale.alpha0, m);
    if (!(a < 0.25))
      continue;
    bool ok = true;
    for (double r : grid) {
      if (scale(r) > factor * scale(a * r) * (1.0 + 1e-12)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      k.alpha = a;
      k.alpha_exponent = m;
      break;
    }
  }
  if (k.alpha_exponent == 0)
    throw NumericalError("build_constants: no admissible alpha = alpha0^m within " +
                         std::to_string(kMaxAlphaHalvings) +
                         " steps (scale decays too slowly on the grid)");

  k.j0 = least_j0(k.beta, cD);
  k.m0 = 0;
  while (std::ldexp(1.0, k.m0) <= 2.0 * static_cast<double>(k.j0))
    ++k.m0;
  k.m1 = 0;
  while (std::ldexp(k.alpha * k.alpha, k.m1) <= 1.0)
    ++k.m1;
  k.K = kappa_inv * std::pow(cD, k.m0 + k.m1);
  return k;
}

std::vector<double> radii_sequence(const GreenScale &scale, const HarnackConstants &k, double R,
                                   std::int64_t j_max) {
  if (j_max < 1)
    throw DomainError("radii_sequence needs j_max >= 1");
  if (!(R > 0.0) || !(R < std::min(scale.R0, k.inputs.R1)))
    throw DomainError("radii_sequence needs 0 < R < min(R0, R1)");
  const double a4 = std::pow(k.alpha, 4);
  const double base = std::pow(k.inputs.cD, k.m0) * scale(a4 * R);
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(j_max));
  const long double growth = std::log1p(static_cast<long double>(k.beta));
  for (std::int64_t j = 1; j <= j_max; ++j) {
    const double v =
        base * static_cast<double>(std::exp(static_cast<long double>(j - 1) * growth));
    try {
      r.push_back(invert(scale, v, 1e-14));
    } catch (const OutOfRangeError &e) {
      throw OutOfRangeError("radii_sequence: r_" + std::to_string(j) +
                            " needs a g-value outside the invertible range (" + e.what() +
                            "); use a smaller R or a wider tabulation");
    }
  }
  return r;
}

SumCheck check_sum_rj(const GreenScale &scale, const HarnackConstants &k, double R,
                      std::int64_t j_max) {
  if (j_max == 0)
    j_max = 10 * k.j0;
  const std::vector<double> r = radii_sequence(scale, k, R, j_max);
  SumCheck s;
  s.j_max = j_max;
  s.bound = std::pow(k.alpha, 4) * R;
  // Increasing terms are added smallest first.
  for (auto it = r.rbegin(); it != r.rend(); ++it)
    s.sum += *it;
  const std::int64_t m_star = j_max / k.j0;
  s.tail = static_cast<double>(k.j0) * std::ldexp(s.bound, -(k.m0 + static_cast<int>(m_star)) + 1);
  for (std::int64_t j = 1; j <= j_max; ++j) {
    const std::int64_t m = (j - 1) / k.j0;
    const double env = std::ldexp(s.bound, -(k.m0 + static_cast<int>(m)));
    if (r[static_cast<std::size_t>(j - 1)] > env * (1.0 + 1e-12))
      ++s.envelope_violations;
  }
  s.pass = s.sum + s.tail < s.bound && s.envelope_violations == 0;
  return s;
}

} // namespace hl
