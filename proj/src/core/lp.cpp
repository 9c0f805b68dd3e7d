#include "lp.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hl {

namespace {

constexpr double kFeasibilityTolerance = 1e-9;
constexpr double kPivotTolerance = 1e-11;
constexpr int kRefactorInterval = 200;
constexpr int kDegenerateBeforeBland = 50;

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Certificate {
  double primal_violation = 0.0; // max (K mu - 1)+
  double dual_violation = 0.0;   // max (1 - K' lambda)+
  double objective = 0.0;
  double dual_objective = 0.0;
};

Certificate certify(const MatrixXd &K, const VectorXd &mu, const VectorXd &lambda) {
  Certificate c;
  c.objective = mu.sum();
  c.dual_objective = lambda.sum();
  const VectorXd load = K * mu;
  const VectorXd cover = K.transpose() * lambda;
  c.primal_violation = std::max(0.0, (load.array() - 1.0).maxCoeff());
  c.dual_violation = std::max(0.0, (1.0 - cover.array()).maxCoeff());
  return c;
}

double relative_gap(double primal, double dual) {
  return std::abs(dual - primal) / std::max(std::abs(primal), 1e-300);
}

bool acceptable(const Certificate &c) {
  return c.primal_violation <= 1e-7 && c.dual_violation <= 1e-7 &&
         relative_gap(c.objective, c.dual_objective) <= kLpGapTolerance;
}

// Square fast path: if K^-1 1 and K^-T 1 are both nonnegative, complementary
// slackness holds with every constraint tight.
bool solve_square(const MatrixXd &K, PackingSolution &out) {
  if (K.rows() != K.cols())
    return false;
  const Eigen::PartialPivLU<MatrixXd> lu(K);
  const VectorXd ones = VectorXd::Ones(K.rows());
  VectorXd mu = lu.solve(ones);
  VectorXd lambda = lu.transpose().solve(ones);
  if (!mu.allFinite() || !lambda.allFinite())
    return false;
  const double scale = std::max(mu.cwiseAbs().maxCoeff(), lambda.cwiseAbs().maxCoeff());
  if (mu.minCoeff() < -1e-12 * scale || lambda.minCoeff() < -1e-12 * scale)
    return false;
  mu = mu.cwiseMax(0.0);
  lambda = lambda.cwiseMax(0.0);
  const Certificate c = certify(K, mu, lambda);
  if (!acceptable(c))
    return false;
  out.primal = mu;
  out.dual = lambda;
  out.objective = c.objective;
  out.dual_objective = c.dual_objective;
  out.iterations = 0;
  out.method = "lu";
  return true;
}

class RevisedSimplex {
public:
  explicit RevisedSimplex(const MatrixXd &K)
      : K_(K), m_(K.rows()), n_(K.cols()), basis_(m_, -1), in_basis_(n_ + m_, -1) {}

  // Slack basis, or a warm start from the support set `active` (structural
  // columns paired with the rows of the same index) when that basis is
  // primal feasible.
  void start(const std::vector<int> &active) {
    if (!active.empty() && try_basis(active))
      return;
    for (Eigen::Index i = 0; i < m_; ++i)
      set_basic(static_cast<int>(i), static_cast<int>(n_ + i));
    Binv_ = MatrixXd::Identity(m_, m_);
    xB_ = VectorXd::Ones(m_);
  }

  void run(PackingSolution &out) {
    const int max_iterations = static_cast<int>(50 * (m_ + n_)) + 1000;
    int degenerate = 0;
    bool bland = false;
    for (int it = 1; it <= max_iterations; ++it) {
      if (it % kRefactorInterval == 0)
        refactor();
      const VectorXd y = Binv_.transpose() * cost_basic();
      const VectorXd reduced = 1.0 - (K_.transpose() * y).array();

      int entering = -1;
      double best = kFeasibilityTolerance;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        if (in_basis_[j] >= 0)
          continue;
        const double dj = j < n_ ? reduced(j) : -y(j - n_);
        if (dj > best) {
          entering = static_cast<int>(j);
          if (bland)
            break;
          best = dj;
        }
      }
      if (entering < 0) {
        finish(out, y, it - 1);
        return;
      }

      const VectorXd col = entering < n_ ? VectorXd(Binv_ * K_.col(entering))
                                         : VectorXd(Binv_.col(entering - n_));
      int leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (col(i) <= kPivotTolerance)
          continue;
        const double t = std::max(xB_(i), 0.0) / col(i);
        if (t < theta || (t == theta && bland && basis_[i] < basis_[leave])) {
          theta = t;
          leave = static_cast<int>(i);
        }
      }
      if (leave < 0)
        throw NumericalError("capacity LP is unbounded");

      pivot(leave, entering, col, theta);
      if (theta <= 1e-14) {
        if (++degenerate > kDegenerateBeforeBland)
          bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }
    throw NumericalError("capacity LP: simplex did not terminate within " +
                         std::to_string(max_iterations) + " iterations");
  }

private:
  void set_basic(int row, int var) {
    if (basis_[row] >= 0 && in_basis_[basis_[row]] == row)
      in_basis_[basis_[row]] = -1;
    basis_[row] = var;
    in_basis_[var] = row;
  }

  VectorXd cost_basic() const {
    VectorXd c(m_);
    for (Eigen::Index i = 0; i < m_; ++i)
      c(i) = basis_[i] < n_ ? 1.0 : 0.0;
    return c;
  }

  MatrixXd basis_matrix() const {
    MatrixXd B = MatrixXd::Zero(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_)
        B.col(i) = K_.col(basis_[i]);
      else
        B(basis_[i] - n_, i) = 1.0;
    }
    return B;
  }

  void refactor() {
    Binv_ = basis_matrix().partialPivLu().inverse();
    xB_ = Binv_ * VectorXd::Ones(m_);
  }

  bool try_basis(const std::vector<int> &active) {
    std::vector<char> row_used(m_, 0);
    std::fill(basis_.begin(), basis_.end(), -1);
    std::fill(in_basis_.begin(), in_basis_.end(), -1);
    for (int j : active) {
      set_basic(j, j);
      row_used[j] = 1;
    }
    for (Eigen::Index i = 0; i < m_; ++i)
      if (!row_used[i])
        set_basic(static_cast<int>(i), static_cast<int>(n_ + i));
    const Eigen::PartialPivLU<MatrixXd> lu(basis_matrix());
    Binv_ = lu.inverse();
    xB_ = Binv_ * VectorXd::Ones(m_);
    if (!xB_.allFinite() || xB_.minCoeff() < -kFeasibilityTolerance) {
      std::fill(basis_.begin(), basis_.end(), -1);
      std::fill(in_basis_.begin(), in_basis_.end(), -1);
      return false;
    }
    xB_ = xB_.cwiseMax(0.0);
    return true;
  }

  void pivot(int leave, int entering, const VectorXd &col, double theta) {
    const double p = col(leave);
    const Eigen::RowVectorXd pivot_row = Binv_.row(leave) / p;
    Binv_.noalias() -= col * pivot_row;
    Binv_.row(leave) = pivot_row;
    xB_ -= theta * col;
    xB_(leave) = theta;
    set_basic(leave, entering);
  }

  void finish(PackingSolution &out, const VectorXd &y, int iterations) {
    refactor();
    out.primal = VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] < n_)
        out.primal(basis_[i]) = std::max(xB_(i), 0.0);
    out.dual = y.cwiseMax(0.0);
    out.iterations = iterations;
    out.method = "simplex";
  }

  const MatrixXd &K_;
  Eigen::Index m_, n_;
  std::vector<int> basis_;
  std::vector<int> in_basis_;
  MatrixXd Binv_;
  VectorXd xB_;
};

// Support of a nonnegative solution of the square system restricted to a
// shrinking index set; used as a simplex warm start.
std::vector<int> active_set_guess(const MatrixXd &K) {
  std::vector<int> active;
  if (K.rows() != K.cols())
    return active;
  for (Eigen::Index j = 0; j < K.cols(); ++j)
    active.push_back(static_cast<int>(j));
  for (int round = 0; round < 30 && !active.empty(); ++round) {
    const auto k = static_cast<Eigen::Index>(active.size());
    MatrixXd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b)
        sub(a, b) = K(active[a], active[b]);
    const VectorXd mu = sub.partialPivLu().solve(VectorXd::Ones(k));
    std::vector<int> next;
    for (Eigen::Index a = 0; a < k; ++a)
      if (mu(a) > 0.0)
        next.push_back(active[a]);
    if (next.size() == active.size())
      return active;
    active = std::move(next);
  }
  return {};
}

} // namespace

PackingSolution solve_packing_lp(const MatrixXd &K) {
  if (K.rows() == 0 || K.cols() == 0)
    throw DomainError("capacity LP needs at least one support and one test point");
  if ((K.array() < 0.0).any() || K.array().isNaN().any())
    throw DomainError("capacity LP needs a nonnegative kernel matrix");

  std::vector<int> finite_cols;
  for (Eigen::Index j = 0; j < K.cols(); ++j)
    if (K.col(j).allFinite())
      finite_cols.push_back(static_cast<int>(j));

  PackingSolution out;
  out.primal = VectorXd::Zero(K.cols());
  out.dual = VectorXd::Zero(K.rows());
  if (finite_cols.empty()) {
    out.method = "trivial";
    return out;
  }

  // Rows with an infinite entry in a surviving column cannot occur; the
  // reduced matrix is finite.
  MatrixXd R(K.rows(), static_cast<Eigen::Index>(finite_cols.size()));
  for (std::size_t k = 0; k < finite_cols.size(); ++k)
    R.col(static_cast<Eigen::Index>(k)) = K.col(finite_cols[k]);
  for (Eigen::Index j = 0; j < R.cols(); ++j)
    if (R.col(j).maxCoeff() <= 0.0)
      throw NumericalError("capacity LP is unbounded: support atom " +
                           std::to_string(finite_cols[static_cast<std::size_t>(j)]) +
                           " has zero potential at every test point");

  PackingSolution reduced;
  if (!solve_square(R, reduced)) {
    RevisedSimplex simplex(R);
    simplex.start(active_set_guess(R));
    simplex.run(reduced);
  }

  for (std::size_t k = 0; k < finite_cols.size(); ++k)
    out.primal(finite_cols[k]) = reduced.primal(static_cast<Eigen::Index>(k));
  out.dual = reduced.dual;
  const Certificate c = certify(R, reduced.primal, reduced.dual);
  out.objective = c.objective;
  // Scale lambda up to dual feasibility so the reported dual bound is valid.
  const VectorXd cover = R.transpose() * reduced.dual;
  const double worst = cover.minCoeff();
  if (worst > 0.0 && worst < 1.0)
    out.dual /= worst;
  out.dual_objective = out.dual.sum();
  out.duality_gap = relative_gap(out.objective, out.dual_objective);
  out.iterations = reduced.iterations;
  out.method = reduced.method;
  if (c.primal_violation > 1e-6)
    throw NumericalError("capacity LP: returned measure violates G mu <= 1 by " +
                         std::to_string(c.primal_violation));
  return out;
}

} // namespace hl
