#pragma once

// Primal recovery from an optimal dual, and an independent certificate.
//
// With xi = ln x, every term with a non-negligible dual weight gives one
// linear equation:
//   objective term t:      a_t . xi = ln(delta_t V)        - ln c_t
//   constraint-i term t:   a_t . xi = ln(delta_t / lambda_i) - ln c_t
// The stacked system is solved in the least-squares sense. A rank-deficient
// system takes the minimum-norm solution unless that violates a constraint
// left out of the system.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mogp/dual.hpp"
#include "mogp/error.hpp"
#include "mogp/linalg.hpp"
#include "mogp/scalarize.hpp"
#include "mogp/solver.hpp"

namespace mogp {

struct PrimalSolution {
  std::vector<double> x;
  std::vector<double> objective_values;  // g_k0(x), original objectives
  double Z = 0.0;                        // sum_k w_k g_k0(x)
  bool unique = true;                    // recovery system had full column rank
  double recovery_residual = 0.0;        // inf-norm residual of the log-linear system
  std::size_t equations = 0;
};

struct VerificationReport {
  double max_constraint_violation = 0.0;
  double duality_gap = 0.0;  // |Z - V| / V
  double recovery_residual = 0.0;
  std::vector<std::size_t> active_constraints;  // 0-based constraint indices
  std::vector<double> constraint_values;        // g_i(x)
};

constexpr double kRecoveryResidualLimit = 1e-6;

/// Z and the per-objective values are evaluated directly at x, never read from V.
inline PrimalSolution evaluate_primal(const ScalarizedProgram& scalarized, std::vector<double> x) {
  PrimalSolution primal;
  primal.x = std::move(x);
  const auto& source = scalarized.source;
  primal.objective_values.reserve(source.num_objectives());
  for (const auto& g : source.objectives()) {
    primal.objective_values.push_back(evaluate_posynomial(g, primal.x));
  }
  primal.Z = 0.0;
  for (std::size_t k = 0; k < primal.objective_values.size(); ++k) {
    primal.Z += scalarized.objective_weights[k] * primal.objective_values[k];
  }
  return primal;
}

namespace detail {

// ln g(exp(xi)) with its gradient and Hessian in xi.
struct LogPosynomial {
  double value;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

inline LogPosynomial log_posynomial(const Posynomial& g, const Eigen::VectorXd& xi) {
  const auto n = xi.size();
  Eigen::VectorXd logs(static_cast<Eigen::Index>(g.size()));
  Eigen::MatrixXd a(static_cast<Eigen::Index>(g.size()), n);
  for (std::size_t t = 0; t < g.size(); ++t) {
    const auto row = static_cast<Eigen::Index>(t);
    for (Eigen::Index j = 0; j < n; ++j) a(row, j) = g.term(t).exponent(static_cast<std::size_t>(j));
    logs(row) = std::log(g.term(t).coefficient()) + a.row(row).dot(xi);
  }
  const double top = logs.maxCoeff();
  const Eigen::VectorXd w = (logs.array() - top).exp();
  const Eigen::VectorXd p = w / w.sum();
  LogPosynomial out;
  out.value = top + std::log(w.sum());
  out.gradient = a.transpose() * p;
  out.hessian = a.transpose() * p.asDiagonal() * a - out.gradient * out.gradient.transpose();
  return out;
}

// With a rank-deficient recovery system every xi0 + N z fits the dual
// equally well. Terms left out of the system (dual weight at or below the
// threshold) may still be large at the minimum-norm choice, violating
// constraints or lifting the objective above V. Move along N, minimizing a
// smoothed max of ln g_i - offset_i, until every such quantity is <= 1e-9.
struct LogBound {
  const Posynomial* posynomial;
  double offset;
};

inline Eigen::VectorXd restore_feasibility(const std::vector<LogBound>& bounds, const Eigen::VectorXd& xi0,
                                           const Eigen::MatrixXd& N) {
  constexpr double kSlack = 1e-9;
  auto worst = [&](const Eigen::VectorXd& xi) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& b : bounds) m = std::max(m, log_posynomial(*b.posynomial, xi).value - b.offset);
    return m;
  };
  Eigen::VectorXd z = Eigen::VectorXd::Zero(N.cols());
  if (bounds.empty() || N.cols() == 0 || worst(xi0) <= kSlack) return xi0;

  for (double tau : {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    auto smoothed = [&](const Eigen::VectorXd& zz, Eigen::VectorXd* gradient, Eigen::MatrixXd* hessian) {
      const Eigen::VectorXd xi = xi0 + N * zz;
      std::vector<LogPosynomial> parts;
      Eigen::VectorXd phi(static_cast<Eigen::Index>(bounds.size()));
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        parts.push_back(log_posynomial(*bounds[i].posynomial, xi));
        phi(static_cast<Eigen::Index>(i)) = parts.back().value - bounds[i].offset;
      }
      const double top = phi.maxCoeff();
      const Eigen::VectorXd w = ((phi.array() - top) / tau).exp();
      const Eigen::VectorXd pi = w / w.sum();
      if (gradient) {
        const auto n = xi.size();
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < parts.size(); ++i) {
          const double weight = pi(static_cast<Eigen::Index>(i));
          g += weight * parts[i].gradient;
          h += weight * parts[i].hessian;
          outer += weight * parts[i].gradient * parts[i].gradient.transpose();
        }
        h += (outer - g * g.transpose()) / tau;
        *gradient = N.transpose() * g;
        *hessian = N.transpose() * h * N;
      }
      return top + tau * std::log(w.sum());
    };

    for (int iteration = 0; iteration < 100; ++iteration) {
      Eigen::VectorXd g;
      Eigen::MatrixXd h;
      const double f = smoothed(z, &g, &h);
      if (g.lpNorm<Eigen::Infinity>() <= 1e-12) break;
      const double shift = 1e-10 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());
      h.diagonal().array() += shift;
      Eigen::VectorXd dz = -h.ldlt().solve(g);
      if (!dz.allFinite() || g.dot(dz) >= 0.0) dz = -g;
      const double length = dz.lpNorm<Eigen::Infinity>();
      if (length > 5.0) dz *= 5.0 / length;
      double alpha = 1.0;
      bool moved = false;
      for (int backtrack = 0; backtrack < 50; ++backtrack) {
        const Eigen::VectorXd trial = z + alpha * dz;
        if (smoothed(trial, nullptr, nullptr) <= f + 1e-4 * alpha * g.dot(dz)) {
          z = trial;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (worst(xi0 + N * z) <= kSlack) return xi0 + N * z;
      if (!moved) break;
    }
  }
  return xi0 + N * z;
}

}  // namespace detail

inline PrimalSolution recover_primal(const DualSolution& dual, const ScalarizedProgram& scalarized,
                                     const SolverOptions& options = {}) {
  if (dual.status != DualStatus::kOptimal) {
    throw Error(ErrorKind::kRecoveryImpossible, "primal recovery needs an optimal dual solution");
  }
  const DualProgram program = build_dual(scalarized);
  const auto& delta = dual.point.delta;
  if (static_cast<std::size_t>(delta.size()) != program.num_terms()) {
    throw Error(ErrorKind::kDimensionMismatch, "dual solution does not match the program");
  }
  const double threshold = options.active_threshold;
  const double log_v = std::log(dual.value);

  std::vector<Eigen::Index> rows;
  std::vector<double> rhs;
  for (Eigen::Index t = 0; t < delta.size(); ++t) {
    if (!(delta(t) > threshold)) continue;
    const std::size_t group = program.group(static_cast<std::size_t>(t));
    const double log_c = std::log(program.coeffs()(t));
    if (group == 0) {
      rhs.push_back(std::log(delta(t)) + log_v - log_c);
    } else {
      const double lambda = dual.lambda(static_cast<Eigen::Index>(group - 1));
      rhs.push_back(std::log(delta(t)) - std::log(lambda) - log_c);
    }
    rows.push_back(t);
  }
  if (rows.empty()) {
    throw Error(ErrorKind::kRecoveryImpossible, "no dual variable exceeds the active threshold");
  }

  const auto n = static_cast<Eigen::Index>(program.num_variables());
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), n);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t q = 0; q < rows.size(); ++q) {
    A.row(static_cast<Eigen::Index>(q)) = program.exponents().row(rows[q]);
    b(static_cast<Eigen::Index>(q)) = rhs[q];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  cod.setThreshold(1e-10);
  Eigen::VectorXd xi = cod.solve(b);
  const double residual = (A * xi - b).lpNorm<Eigen::Infinity>();
  if (!(residual <= kRecoveryResidualLimit)) {
    throw Error(ErrorKind::kInconsistentCertificate,
                "primal-dual equations are inconsistent (residual " + std::to_string(residual) +
                    "); the dual point is not optimal");
  }

  if (cod.rank() < n) {
    std::vector<detail::LogBound> bounds{{&scalarized.program.objective(), log_v}};
    for (const auto& g : scalarized.program.constraints()) bounds.push_back({&g, 0.0});
    xi = detail::restore_feasibility(bounds, xi, linalg::nullspace(A).basis);
  }

  std::vector<double> x(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = std::exp(xi(j));
  PrimalSolution primal = evaluate_primal(scalarized, std::move(x));
  primal.unique = cod.rank() == n;
  primal.recovery_residual = residual;
  primal.equations = rows.size();
  return primal;
}

/// Direct evaluation of feasibility, complementary slackness and the duality gap.
inline VerificationReport verify(const PrimalSolution& primal, const DualSolution& dual,
                                 const ScalarizedProgram& scalarized, const SolverOptions& options = {}) {
  VerificationReport report;
  const auto& constraints = scalarized.program.constraints();
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const double gi = evaluate_posynomial(constraints[i], primal.x);
    report.constraint_values.push_back(gi);
    double violation = std::max(gi - 1.0, 0.0);
    const bool active = i < static_cast<std::size_t>(dual.lambda.size()) &&
                        dual.lambda(static_cast<Eigen::Index>(i)) > options.active_threshold;
    if (active) {
      report.active_constraints.push_back(i);
      violation = std::abs(gi - 1.0);
    }
    report.max_constraint_violation = std::max(report.max_constraint_violation, violation);
  }
  const double z = evaluate_posynomial(scalarized.program.objective(), primal.x);
  report.duality_gap = std::abs(z - dual.value) / dual.value;
  report.recovery_residual = primal.recovery_residual;
  return report;
}

}  // namespace mogp
