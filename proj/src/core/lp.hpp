#pragma once

#include <Eigen/Dense>

#include <string>

namespace hl {

// Packing LP
//   maximize 1'mu  subject to  K mu <= 1,  mu >= 0
// for an entrywise nonnegative K (rows: test points, columns: support atoms).
// +inf entries force the column's variable to zero.
struct PackingSolution {
  Eigen::VectorXd primal;  // mu, one entry per column
  Eigen::VectorXd dual;    // lambda >= 0 with K' lambda >= 1, one entry per row
  double objective = 0.0;
  double dual_objective = 0.0;
  // |dual_objective - objective| / max(objective, tiny)
  double duality_gap = 0.0;
  int iterations = 0;
  std::string method;
};

inline constexpr double kLpGapTolerance = 1e-6;

// Throws NumericalError if the problem is unbounded (a column without any
// positive entry) or the solver stalls.
PackingSolution solve_packing_lp(const Eigen::MatrixXd &K);

} // namespace hl
