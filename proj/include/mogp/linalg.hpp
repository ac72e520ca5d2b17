#pragma once

// Small dense helpers: a rank-revealing nullspace basis and a two-phase
// simplex for standard-form LPs. Sized for dual systems of a few dozen terms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace mogp::linalg {

struct NullspaceResult {
  Eigen::MatrixXd basis;  // columns orthonormal, E * basis ~ 0
  Eigen::Index rank = 0;
};

/// Orthonormal basis of ker(E) from a column-pivoted QR of E^T. A pivot counts
/// toward the rank when it exceeds 1e-12 times the largest row norm of E.
inline NullspaceResult nullspace(const Eigen::MatrixXd& E) {
  NullspaceResult result;
  const Eigen::Index cols = E.cols();
  if (E.rows() == 0) {
    result.basis = Eigen::MatrixXd::Identity(cols, cols);
    return result;
  }
  const double scale = E.rowwise().norm().maxCoeff();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(E.transpose());
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  const Eigen::Index diag = std::min(R.rows(), R.cols());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < diag; ++i) {
    if (std::abs(R(i, i)) > 1e-12 * std::max(scale, 1e-300)) ++rank;
  }
  const Eigen::MatrixXd Q = qr.householderQ();
  result.rank = rank;
  result.basis = Q.rightCols(cols - rank);
  return result;
}

/// Minimum-norm solution of E x = b.
inline Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& E, const Eigen::VectorXd& b) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(E);
  cod.setThreshold(1e-12);
  return cod.solve(b);
}

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// maximize c^T x  s.t.  A x = b, x >= 0. Dense tableau, Bland's rule.
inline LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  constexpr double kEps = 1e-11;
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();

  // Columns: [x (n) | artificials (m) | rhs]. Row m holds reduced costs of the
  // current objective (maximization: entering column has positive cost).
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    tab.row(i).head(n) = sign * A.row(i);
    tab(i, n + i) = 1.0;
    tab(i, n + m) = sign * b(i);
  }
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;
  std::vector<bool> row_alive(static_cast<std::size_t>(m), true);

  auto pivot = [&](Eigen::Index row, Eigen::Index col) {
    tab.row(row) /= tab(row, col);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != row && tab(i, col) != 0.0) tab.row(i) -= tab(i, col) * tab.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  };

  // Runs simplex over the first `usable` columns. Returns false if unbounded.
  auto run = [&](Eigen::Index usable) {
    for (int guard = 0; guard < 10000; ++guard) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < usable; ++j) {
        if (tab(m, j) > kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!row_alive[static_cast<std::size_t>(i)] || tab(i, enter) <= kEps) continue;
        const double ratio = tab(i, n + m) / tab(i, enter);
        if (ratio < best_ratio - kEps ||
            (leave >= 0 && std::abs(ratio - best_ratio) <= kEps &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  };

  // Phase 1: maximize -sum(artificials), expressed in reduced-cost form.
  tab.row(m).setZero();
  for (Eigen::Index i = 0; i < m; ++i) tab.row(m) += tab.row(i);
  tab.row(m).segment(n, m).setZero();
  run(n);
  LpResult result;
  if (tab(m, n + m) > 1e-9 * std::max(1.0, b.lpNorm<Eigen::Infinity>())) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  // Drive remaining artificials out of the basis; rows that cannot be pivoted are redundant.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab(i, j)) > 1e-9) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      pivot(i, col);
    } else {
      row_alive[static_cast<std::size_t>(i)] = false;
    }
  }

  // Phase 2.
  tab.row(m).setZero();
  tab.row(m).head(n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!row_alive[static_cast<std::size_t>(i)]) continue;
    const Eigen::Index col = basis[static_cast<std::size_t>(i)];
    if (tab(m, col) != 0.0) tab.row(m) -= tab(m, col) * tab.row(i);
  }
  if (!run(n)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!row_alive[static_cast<std::size_t>(i)]) continue;
    const Eigen::Index col = basis[static_cast<std::size_t>(i)];
    if (col < n) result.x(col) = std::max(0.0, tab(i, n + m));
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace mogp::linalg
