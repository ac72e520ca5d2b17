#pragma once

// Maximizes the log-dual over {delta >= 0, E delta = r}.
//
// The feasible affine set is parametrized as delta = delta0 + N z with N an
// orthonormal basis of ker(E). Ascent steps are Newton steps on the reduced
// concave objective, truncated at 0.99 of the distance to the boundary and
// backtracked until the Armijo condition holds.
//
// A constraint whose lambda falls below the active threshold is pinned at
// zero and removed from the free set. At a stationary point each pinned
// constraint is tested for re-entry: the best directional derivative into
// group i equals ln(sum_t c_t exp(-E_t^T mu)) with mu the equality
// multipliers, i.e. ln g_i(x) at the implied primal point, so a pinned group
// is released only when its constraint would be violated.

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

namespace mogp {

struct SolverOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-9;
  double equality_tolerance = 1e-10;
  double active_threshold = 1e-7;
};

enum class DualStatus { kOptimal, kMaxIterations };

inline std::string_view to_string(DualStatus status) {
  return status == DualStatus::kOptimal ? "Optimal" : "MaxIterations";
}

struct DualSolution {
  DualPoint point;
  Eigen::VectorXd lambda;             // constraint sums, recomputed from point
  double log_value = 0.0;             // ln V
  double value = 0.0;                 // V
  DualStatus status = DualStatus::kOptimal;
  double reduced_gradient_norm = 0.0; // 2-norm over terms above the active threshold
  double equality_residual = 0.0;     // ||E delta - r||_inf
  int iterations = 0;
  std::vector<double> objective_trace;  // ln V at every accepted iterate
};

/// Phase-I output: a feasible delta with the smallest component maximized.
struct InteriorPoint {
  DualPoint point;
  double min_component = 0.0;
  bool on_boundary = false;              // some terms are zero at every feasible point
  std::vector<std::size_t> fixed_zero;   // those terms
};

namespace detail {

constexpr double kPhaseOnePositive = 1e-10;

// maximize delta_t over the feasible set, capped at 1.
inline double max_component(const Eigen::MatrixXd& E, const Eigen::VectorXd& r, Eigen::Index t,
                            Eigen::VectorXd* maximizer) {
  const Eigen::Index rows = E.rows();
  const Eigen::Index T = E.cols();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows + 1, T + 1);
  A.topLeftCorner(rows, T) = E;
  A(rows, t) = 1.0;
  A(rows, T) = 1.0;
  Eigen::VectorXd b(rows + 1);
  b << r, 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(T + 1);
  c(t) = 1.0;
  const auto lp = linalg::solve_lp(A, b, c);
  if (lp.status != linalg::LpStatus::kOptimal) {
    throw Error(ErrorKind::kDualInfeasible, "dual constraints are inconsistent");
  }
  *maximizer = lp.x.head(T);
  return lp.x(t);
}

// maximize min_t delta_t (capped at 1) subject to E delta = r. Returns false
// when the equations have no solution at all.
inline bool max_min_component(const Eigen::MatrixXd& E, const Eigen::VectorXd& r, Eigen::VectorXd* delta,
                              double* smallest) {
  const Eigen::Index rows = E.rows();
  const Eigen::Index T = E.cols();

  // delta = y + s*1 with y >= 0, s = s_plus - s_minus, s_plus + slack = 1.
  const Eigen::VectorXd row_sums = E.rowwise().sum();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows + 1, T + 3);
  A.topLeftCorner(rows, T) = E;
  A.col(T).head(rows) = row_sums;
  A.col(T + 1).head(rows) = -row_sums;
  A(rows, T) = 1.0;
  A(rows, T + 2) = 1.0;
  Eigen::VectorXd b(rows + 1);
  b << r, 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(T + 3);
  c(T) = 1.0;
  c(T + 1) = -1.0;

  const auto lp = linalg::solve_lp(A, b, c);
  if (lp.status != linalg::LpStatus::kOptimal) return false;
  *smallest = lp.x(T) - lp.x(T + 1);
  *delta = lp.x.head(T).array() + *smallest;
  return true;
}

}  // namespace detail

/// Phase I: maximize min_t delta_t subject to E delta = r. Throws
/// kDualInfeasible when the equations are inconsistent or force a negative
/// component.
inline InteriorPoint find_interior_point(const DualProgram& dual) {
  const Eigen::MatrixXd& E = dual.equality_matrix();
  const Eigen::VectorXd& r = dual.equality_rhs();
  const Eigen::Index T = E.cols();

  Eigen::VectorXd best;
  double s = 0.0;
  if (!detail::max_min_component(E, r, &best, &s)) {
    throw Error(ErrorKind::kDualInfeasible,
                "dual constraints are inconsistent: normality and orthogonality equations have no solution");
  }
  InteriorPoint result;
  if (s < -detail::kPhaseOnePositive) {
    throw Error(ErrorKind::kDualInfeasible,
                "dual constraints are inconsistent: every solution has a negative component (best minimum " +
                    std::to_string(s) + ")");
  }
  if (s > detail::kPhaseOnePositive) {
    result.point.delta = best;
    result.min_component = s;
    return result;
  }

  // Boundary-feasible: find the terms that vanish on the whole feasible set
  // and average the per-term maximizers of the rest.
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(T);
  int contributors = 0;
  for (Eigen::Index t = 0; t < T; ++t) {
    Eigen::VectorXd maximizer;
    const double best = detail::max_component(E, r, t, &maximizer);
    if (best <= detail::kPhaseOnePositive) {
      result.fixed_zero.push_back(static_cast<std::size_t>(t));
    } else {
      sum += maximizer;
      ++contributors;
    }
  }
  if (contributors == 0) {
    throw Error(ErrorKind::kDualInfeasible, "dual constraints admit no non-zero solution");
  }
  result.point.delta = sum / contributors;
  for (std::size_t t : result.fixed_zero) result.point.delta(static_cast<Eigen::Index>(t)) = 0.0;
  result.on_boundary = true;
  result.min_component = 0.0;
  return result;
}

namespace detail {

// At an attained primal optimum every objective term, and every term of an
// active constraint, is positive, and so is its dual weight. A weight that is
// zero on the whole dual feasible set while its group carries positive weight
// therefore means the primal infimum is approached but never reached.
inline void require_attainable(const DualProgram& dual, std::size_t t, const Eigen::VectorXd& lambda,
                               double active_threshold) {
  const std::size_t group = dual.group(t);
  if (group == 0) {
    throw Error(ErrorKind::kDualInfeasible,
                "objective term " + std::to_string(t + 1) +
                    " has zero dual weight at every dual feasible point: the primal infimum is not attained");
  }
  if (lambda(static_cast<Eigen::Index>(group - 1)) > active_threshold) {
    throw Error(ErrorKind::kDualInfeasible,
                "term " + std::to_string(t + 1) + " of active constraint " + std::to_string(group) +
                    " has zero dual weight at every dual feasible point: the primal infimum is not attained");
  }
}

class DualAscent {
 public:
  DualAscent(const DualProgram& dual, const SolverOptions& options)
      : dual_(dual),
        options_(options),
        E_(dual.equality_matrix()),
        r_(dual.equality_rhs()),
        T_(static_cast<Eigen::Index>(dual.num_terms())),
        free_(static_cast<std::size_t>(T_), true),
        structural_zero_(static_cast<std::size_t>(T_), false),
        pinned_(dual.num_constraints() + 1, false),
        unreleasable_(dual.num_constraints() + 1, false),
        term_pinned_(static_cast<std::size_t>(T_), false),
        unreleasable_term_(static_cast<std::size_t>(T_), false) {}

  DualSolution run() {
    InteriorPoint start = find_interior_point(dual_);
    delta_ = start.point.delta;
    for (std::size_t t : start.fixed_zero) {
      if (dual_.group(t) == 0) require_attainable(dual_, t, Eigen::VectorXd(), options_.active_threshold);
      structural_zero_[t] = true;
      free_[t] = false;
      delta_(static_cast<Eigen::Index>(t)) = 0.0;
    }
    rebuild();
    project();

    DualSolution solution;
    double f = objective(delta_);
    solution.objective_trace.push_back(f);
    int iterations = 0;
    int release_budget = 2 * static_cast<int>(dual_.num_constraints() + static_cast<std::size_t>(T_)) + 2;
    bool converged = false;

    while (true) {
      Eigen::VectorXd g = free_gradient();
      Eigen::VectorXd rg = N_.transpose() * g;
      const double rnorm = rg.norm();
      const Eigen::VectorXd dz = rg.size() ? newton_direction(rg) : Eigen::VectorXd();
      const double slope = rg.size() ? rg.dot(dz) : 0.0;
      // Stationary on the coordinates that are reported, and no ascent left
      // worth more than rounding on the tiny ones either (the Newton
      // decrement weighs each coordinate by its size).
      const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
      if (reported_gradient_norm(rg) <= options_.gradient_tolerance &&
          (rnorm <= options_.gradient_tolerance || slope <= rounding)) {
        if (pin_small_groups()) {
          f = objective(delta_);
          continue;
        }
        if (release_budget > 0 && (release_group(g, f) || release_term(g, f))) {
          --release_budget;
          solution.objective_trace.push_back(f);
          continue;
        }
        converged = true;
        break;
      }
      if (iterations >= options_.max_iterations) break;
      ++iterations;

      const Eigen::VectorXd d = N_ * dz;

      double alpha_max = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < d.size(); ++k) {
        if (d(k) < 0.0) alpha_max = std::min(alpha_max, -free_value(k) / d(k));
      }
      if (pin_blocking_terms(d)) {
        f = objective(delta_);
        continue;
      }
      double alpha = std::min(1.0, 0.99 * alpha_max);

      bool accepted = false;
      double f_new = f;
      Eigen::VectorXd candidate;
      // Near the optimum the predicted gain drops below the rounding of f and
      // the sufficient-increase test becomes noise; accept the step instead
      // if it shrinks the reduced gradient.
      const bool at_rounding_floor = slope <= rounding;
      for (int backtrack = 0; backtrack < 60; ++backtrack) {
        candidate = stepped(d, alpha);
        f_new = objective(candidate);
        if (f_new >= f + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
        if (at_rounding_floor && f_new >= f - rounding) {
          const Eigen::VectorXd rg_new = N_.transpose() * free_gradient(candidate);
          if (rg_new.norm() < rnorm) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) break;

      if (!std::isfinite(alpha_max)) {
        // No blocking component: extrapolate while the objective keeps rising.
        while (candidate.lpNorm<Eigen::Infinity>() < 1e9) {
          Eigen::VectorXd further = stepped(d, 2.0 * alpha);
          const double f_further = objective(further);
          if (!(f_further > f_new)) break;
          alpha *= 2.0;
          candidate = std::move(further);
          f_new = f_further;
        }
      }
      delta_ = std::move(candidate);
      f = f_new;
      // Keep rounding drift off E delta = r so convergence is judged on the
      // point that is returned.
      if (dual_.equality_residual(delta_) > 1e-13) {
        const Eigen::VectorXd unprojected = delta_;
        project();
        bool positive = true;
        for (Eigen::Index k : free_index_) positive = positive && delta_(k) > 0.0;
        if (positive) f = objective(delta_);
        else delta_ = unprojected;
      }
      solution.objective_trace.push_back(f);

      if (delta_.lpNorm<Eigen::Infinity>() > 1e8) {
        throw Error(ErrorKind::kUnbounded,
                    "dual objective increases without bound (primal constraints are infeasible)");
      }
      if (pin_small_groups()) f = objective(delta_);
    }

    // A correction at rounding level would only add noise to tiny components.
    if (dual_.equality_residual(delta_) > 1e-13) project();
    delta_ = delta_.cwiseMax(0.0);
    solution.point.delta = delta_;
    solution.lambda = dual_.lambda(delta_);
    if (converged) {
      for (Eigen::Index t = 0; t < T_; ++t) {
        if (structural_zero_[static_cast<std::size_t>(t)]) {
          require_attainable(dual_, static_cast<std::size_t>(t), solution.lambda, options_.active_threshold);
        }
      }
    }
    solution.log_value = objective(delta_);
    solution.value = std::exp(solution.log_value);
    solution.iterations = iterations;
    solution.equality_residual = dual_.equality_residual(delta_);
    solution.reduced_gradient_norm = reported_gradient_norm(N_.transpose() * free_gradient());
    solution.status = converged ? DualStatus::kOptimal : DualStatus::kMaxIterations;
    return solution;
  }

 private:
  double objective(const Eigen::VectorXd& delta) const { return log_dual_objective(dual_, DualPoint{delta}); }

  // Euclidean norm of the reduced gradient over the coordinates with
  // delta_t > active_threshold, the others held fixed. Components below the
  // threshold are reported as zero and need not be stationary; their log
  // gradient is also dominated by rounding in delta. `rg` is the reduced
  // gradient over all free coordinates, reused when nothing is excluded.
  double reported_gradient_norm(const Eigen::VectorXd& rg) const {
    std::vector<Eigen::Index> positions;
    for (std::size_t k = 0; k < free_index_.size(); ++k) {
      if (delta_(free_index_[k]) > options_.active_threshold) positions.push_back(static_cast<Eigen::Index>(k));
    }
    if (positions.size() == free_index_.size()) return rg.norm();
    if (positions.empty()) return 0.0;
    Eigen::MatrixXd Ek(E_.rows(), static_cast<Eigen::Index>(positions.size()));
    for (std::size_t q = 0; q < positions.size(); ++q) Ek.col(static_cast<Eigen::Index>(q)) = Ef_.col(positions[q]);
    const Eigen::MatrixXd Nk = linalg::nullspace(Ek).basis;
    if (Nk.cols() == 0) return 0.0;
    const Eigen::VectorXd g = free_gradient();
    Eigen::VectorXd gk(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t q = 0; q < positions.size(); ++q) gk(static_cast<Eigen::Index>(q)) = g(positions[q]);
    return (Nk.transpose() * gk).norm();
  }

  double free_value(Eigen::Index k) const { return delta_(free_index_[static_cast<std::size_t>(k)]); }

  Eigen::VectorXd stepped(const Eigen::VectorXd& d, double alpha) const {
    Eigen::VectorXd out = delta_;
    for (std::size_t k = 0; k < free_index_.size(); ++k) {
      out(free_index_[k]) += alpha * d(static_cast<Eigen::Index>(k));
      // Steps are truncated before the boundary; rounding can still land on it.
      out(free_index_[k]) = std::max(out(free_index_[k]), 0.0);
    }
    return out;
  }

  void rebuild() {
    free_index_.clear();
    for (Eigen::Index t = 0; t < T_; ++t) {
      if (free_[static_cast<std::size_t>(t)]) free_index_.push_back(t);
    }
    Ef_.resize(E_.rows(), static_cast<Eigen::Index>(free_index_.size()));
    for (std::size_t k = 0; k < free_index_.size(); ++k) {
      Ef_.col(static_cast<Eigen::Index>(k)) = E_.col(free_index_[k]);
    }
    N_ = linalg::nullspace(Ef_).basis;
  }

  // Minimum-norm correction of the free components onto E delta = r.
  // Returns the correction that was applied.
  Eigen::VectorXd project() {
    const Eigen::VectorXd residual = r_ - E_ * delta_;
    if (residual.lpNorm<Eigen::Infinity>() == 0.0 || free_index_.empty()) {
      return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_index_.size()));
    }
    const Eigen::VectorXd correction = linalg::min_norm_solve(Ef_, residual);
    for (std::size_t k = 0; k < free_index_.size(); ++k) {
      delta_(free_index_[k]) += correction(static_cast<Eigen::Index>(k));
    }
    return correction;
  }

  Eigen::VectorXd free_gradient() const { return free_gradient(delta_); }

  Eigen::VectorXd free_gradient(const Eigen::VectorXd& delta) const {
    const Eigen::VectorXd lambda = dual_.lambda(delta);
    Eigen::VectorXd g(static_cast<Eigen::Index>(free_index_.size()));
    for (std::size_t k = 0; k < free_index_.size(); ++k) {
      const Eigen::Index t = free_index_[k];
      double value = std::log(dual_.coeffs()(t)) - std::log(delta(t)) - 1.0;
      const std::size_t group = dual_.group(static_cast<std::size_t>(t));
      if (group > 0) value += std::log(lambda(static_cast<Eigen::Index>(group - 1))) + 1.0;
      g(static_cast<Eigen::Index>(k)) = value;
    }
    return g;
  }

  // Negated Hessian on the free set: diag(1/delta) - sum_i (1/lambda_i) 1_i 1_i^T.
  Eigen::MatrixXd free_neg_hessian() const {
    const Eigen::VectorXd lambda = dual_.lambda(delta_);
    const auto F = static_cast<Eigen::Index>(free_index_.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(F, F);
    for (Eigen::Index a = 0; a < F; ++a) {
      const Eigen::Index ta = free_index_[static_cast<std::size_t>(a)];
      H(a, a) = 1.0 / delta_(ta);
      const std::size_t ga = dual_.group(static_cast<std::size_t>(ta));
      if (ga == 0) continue;
      for (Eigen::Index b = 0; b < F; ++b) {
        const Eigen::Index tb = free_index_[static_cast<std::size_t>(b)];
        if (dual_.group(static_cast<std::size_t>(tb)) == ga) {
          H(a, b) -= 1.0 / lambda(static_cast<Eigen::Index>(ga - 1));
        }
      }
    }
    return H;
  }

  Eigen::VectorXd newton_direction(const Eigen::VectorXd& rg) const {
    Eigen::MatrixXd M = N_.transpose() * free_neg_hessian() * N_;
    M = 0.5 * (M + M.transpose());
    const double scale = std::max(M.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    double mu = 0.0;
    for (int attempt = 0; attempt < 30; ++attempt) {
      Eigen::MatrixXd shifted = M;
      shifted.diagonal().array() += mu;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Eigen::VectorXd D = ldlt.vectorD();
        if (D.minCoeff() > 1e-13 * scale) {
          Eigen::VectorXd dz = ldlt.solve(rg);
          if (dz.allFinite() && rg.dot(dz) > 0.0) return dz;
        }
      }
      mu = mu == 0.0 ? 1e-12 * scale : mu * 100.0;
    }
    return rg;
  }

  bool pin_small_groups() {
    const Eigen::VectorXd lambda = dual_.lambda(delta_);
    std::vector<std::size_t> groups;
    for (std::size_t i = 1; i <= dual_.num_constraints(); ++i) {
      if (pinned_[i]) continue;
      bool has_free = false;
      bool all_small = true;
      for (std::size_t t : dual_.group_terms(i)) {
        if (!free_[t]) continue;
        has_free = true;
        all_small = all_small && delta_(static_cast<Eigen::Index>(t)) < options_.active_threshold;
      }
      if (has_free && (all_small || lambda(static_cast<Eigen::Index>(i - 1)) < options_.active_threshold)) {
        groups.push_back(i);
      }
    }
    if (groups.empty()) return false;

    const Eigen::VectorXd saved_delta = delta_;
    const std::vector<bool> saved_free = free_;
    for (std::size_t i : groups) {
      pinned_[i] = true;
      for (std::size_t t : dual_.group_terms(i)) {
        free_[t] = false;
        delta_(static_cast<Eigen::Index>(t)) = 0.0;
      }
    }
    rebuild();
    project();
    // Free terms that were already below the threshold and the correction
    // pushed through zero are pinned with the groups.
    std::vector<std::size_t> dragged;
    for (Eigen::Index k : free_index_) {
      if (!(delta_(k) > 0.0) && saved_delta(k) < options_.active_threshold) dragged.push_back(static_cast<std::size_t>(k));
    }
    if (!dragged.empty()) {
      delta_ = saved_delta;
      for (std::size_t i : groups) {
        for (std::size_t t : dual_.group_terms(i)) delta_(static_cast<Eigen::Index>(t)) = 0.0;
      }
      for (std::size_t t : dragged) {
        free_[t] = false;
        term_pinned_[t] = true;
        delta_(static_cast<Eigen::Index>(t)) = 0.0;
      }
      rebuild();
      project();
    }
    bool ok = dual_.equality_residual(delta_) <= options_.equality_tolerance;
    for (Eigen::Index k : free_index_) ok = ok && delta_(k) > 0.0;
    if (!ok) {
      delta_ = saved_delta;
      free_ = saved_free;
      for (std::size_t i : groups) pinned_[i] = false;
      for (std::size_t t : dragged) term_pinned_[t] = false;
      rebuild();
      return false;
    }
    return true;
  }

  // Pins free terms below active_threshold that a full Newton step would push
  // through zero, and terms a millionth of the threshold or less. They are
  // reported as zero anyway; left free they shorten every step (decaying
  // geometrically towards the boundary) or dominate the curvature.
  // release_term re-admits any whose primal term turns out to matter.
  bool pin_blocking_terms(const Eigen::VectorXd& d) {
    std::vector<Eigen::Index> blocking;
    for (Eigen::Index k = 0; k < d.size(); ++k) {
      const double value = free_value(k);
      const bool crossing = d(k) < 0.0 && -value / d(k) < 1.0;
      if (value < options_.active_threshold && (crossing || value < 1e-6 * options_.active_threshold)) {
        blocking.push_back(free_index_[static_cast<std::size_t>(k)]);
      }
    }
    if (blocking.empty()) return false;

    const Eigen::VectorXd saved_delta = delta_;
    const std::vector<bool> saved_free = free_;
    for (Eigen::Index t : blocking) {
      free_[static_cast<std::size_t>(t)] = false;
      term_pinned_[static_cast<std::size_t>(t)] = true;
      delta_(t) = 0.0;
    }
    rebuild();
    project();
    bool ok = dual_.equality_residual(delta_) <= options_.equality_tolerance;
    for (Eigen::Index k : free_index_) ok = ok && delta_(k) > 0.0;
    if (!ok) {
      delta_ = saved_delta;
      free_ = saved_free;
      for (Eigen::Index t : blocking) term_pinned_[static_cast<std::size_t>(t)] = false;
      rebuild();
      return false;
    }
    for (std::size_t i = 1; i <= dual_.num_constraints(); ++i) {
      bool has_free = false;
      for (std::size_t t : dual_.group_terms(i)) has_free = has_free || free_[t];
      if (!has_free) pinned_[i] = true;
    }
    return true;
  }

  // Re-admits the pinned group with the largest positive entry derivative.
  bool release_group(const Eigen::VectorXd& g, double& f) {
    bool any = false;
    for (std::size_t i = 1; i < pinned_.size(); ++i) any = any || (pinned_[i] && !unreleasable_[i]);
    if (!any) return false;

    const Eigen::VectorXd mu = linalg::min_norm_solve(Ef_.transpose(), g);
    std::size_t best_group = 0;
    double best_score = 1e-9;
    Eigen::VectorXd best_u;
    std::vector<std::size_t> best_terms;
    for (std::size_t i = 1; i < pinned_.size(); ++i) {
      if (!pinned_[i] || unreleasable_[i]) continue;
      std::vector<std::size_t> terms;
      for (std::size_t t : dual_.group_terms(i)) {
        if (!structural_zero_[t]) terms.push_back(t);
      }
      if (terms.empty()) continue;
      Eigen::VectorXd s(static_cast<Eigen::Index>(terms.size()));
      for (std::size_t q = 0; q < terms.size(); ++q) {
        const auto t = static_cast<Eigen::Index>(terms[q]);
        s(static_cast<Eigen::Index>(q)) = std::log(dual_.coeffs()(t)) - E_.col(t).dot(mu);
      }
      const double peak = s.maxCoeff();
      const Eigen::VectorXd w = (s.array() - peak).exp();
      const double score = peak + std::log(w.sum());
      if (score > best_score) {
        best_score = score;
        best_group = i;
        best_u = w / w.sum();
        best_terms = terms;
      }
    }
    if (best_group == 0) return false;

    Eigen::VectorXd entering_rhs = Eigen::VectorXd::Zero(E_.rows());
    for (std::size_t q = 0; q < best_terms.size(); ++q) {
      entering_rhs -= best_u(static_cast<Eigen::Index>(q)) * E_.col(static_cast<Eigen::Index>(best_terms[q]));
    }
    const Eigen::VectorXd d_free = linalg::min_norm_solve(Ef_, entering_rhs);
    if ((Ef_ * d_free - entering_rhs).lpNorm<Eigen::Infinity>() > 1e-9) {
      // Those entering proportions break orthogonality; head instead for a
      // point of the enlarged face with every one of its terms positive.
      if (enter_face(best_group, best_terms, f)) return true;
      unreleasable_[best_group] = true;
      return false;
    }
    double eps = 1.0;
    for (Eigen::Index k = 0; k < d_free.size(); ++k) {
      if (d_free(k) < 0.0) eps = std::min(eps, -0.5 * free_value(k) / d_free(k));
    }
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::VectorXd candidate = delta_;
      for (std::size_t k = 0; k < free_index_.size(); ++k) {
        candidate(free_index_[k]) += eps * d_free(static_cast<Eigen::Index>(k));
      }
      for (std::size_t q = 0; q < best_terms.size(); ++q) {
        candidate(static_cast<Eigen::Index>(best_terms[q])) = eps * best_u(static_cast<Eigen::Index>(q));
      }
      const double f_candidate = objective(candidate);
      if (f_candidate > f) {
        delta_ = candidate;
        f = f_candidate;
        pinned_[best_group] = false;
        for (std::size_t t : best_terms) {
          free_[t] = true;
          term_pinned_[t] = false;
        }
        rebuild();
        return true;
      }
      eps *= 0.5;
    }
    unreleasable_[best_group] = true;
    return false;
  }

  // Moves along the segment towards the max-min point of the face spanned by
  // the free terms and `terms`, accepting the first increase of f.
  bool enter_face(std::size_t group, const std::vector<std::size_t>& terms, double& f) {
    std::vector<Eigen::Index> columns(free_index_.begin(), free_index_.end());
    for (std::size_t t : terms) columns.push_back(static_cast<Eigen::Index>(t));
    Eigen::MatrixXd Es(E_.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t q = 0; q < columns.size(); ++q) Es.col(static_cast<Eigen::Index>(q)) = E_.col(columns[q]);
    Eigen::VectorXd target_columns;
    double smallest = 0.0;
    if (!max_min_component(Es, r_, &target_columns, &smallest) || !(smallest > kPhaseOnePositive)) return false;
    Eigen::VectorXd target = Eigen::VectorXd::Zero(T_);
    for (std::size_t q = 0; q < columns.size(); ++q) target(columns[q]) = target_columns(static_cast<Eigen::Index>(q));

    double eps = 0.5;
    for (int attempt = 0; attempt < 60; ++attempt) {
      const Eigen::VectorXd candidate = (1.0 - eps) * delta_ + eps * target;
      const double f_candidate = objective(candidate);
      if (f_candidate > f) {
        delta_ = candidate;
        f = f_candidate;
        pinned_[group] = false;
        for (std::size_t t : terms) {
          free_[t] = true;
          term_pinned_[t] = false;
        }
        rebuild();
        return true;
      }
      eps *= 0.5;
    }
    return false;
  }

  // Re-admits the individually pinned term (in a group that still has free
  // terms) whose primal term value u_t = delta_t / lambda_i, predicted from the
  // multipliers of the current face, is largest, provided it exceeds 1e-9.
  // Leaving such a term out would bias the recovered point.
  bool release_term(const Eigen::VectorXd& g, double& f) {
    const Eigen::VectorXd mu = linalg::min_norm_solve(Ef_.transpose(), g);
    const Eigen::VectorXd lambda = dual_.lambda(delta_);
    std::size_t best = 0;
    double best_value = 1e-9;
    double best_weight = 0.0;
    bool found = false;
    for (std::size_t t = 0; t < term_pinned_.size(); ++t) {
      if (!term_pinned_[t] || unreleasable_term_[t]) continue;
      const std::size_t group = dual_.group(t);
      if (group > 0 && pinned_[group]) continue;
      const auto col = static_cast<Eigen::Index>(t);
      const double log_value = std::log(dual_.coeffs()(col)) - E_.col(col).dot(mu) - (group == 0 ? 1.0 : 0.0);
      if (std::exp(log_value) > best_value) {
        best_value = std::exp(log_value);
        best_weight = group == 0 ? best_value : best_value * lambda(static_cast<Eigen::Index>(group - 1));
        best = t;
        found = true;
      }
    }
    if (!found) return false;

    const auto col = static_cast<Eigen::Index>(best);
    const Eigen::VectorXd d_free = linalg::min_norm_solve(Ef_, -E_.col(col));
    if ((Ef_ * d_free + E_.col(col)).lpNorm<Eigen::Infinity>() > 1e-9) {
      unreleasable_term_[best] = true;
      return false;
    }
    double eps = best_weight;
    for (Eigen::Index k = 0; k < d_free.size(); ++k) {
      if (d_free(k) < 0.0) eps = std::min(eps, -0.5 * free_value(k) / d_free(k));
    }
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::VectorXd candidate = delta_;
      for (std::size_t k = 0; k < free_index_.size(); ++k) {
        candidate(free_index_[k]) += eps * d_free(static_cast<Eigen::Index>(k));
      }
      candidate(col) = eps;
      const double f_candidate = objective(candidate);
      if (f_candidate > f) {
        delta_ = candidate;
        f = f_candidate;
        free_[best] = true;
        term_pinned_[best] = false;
        rebuild();
        return true;
      }
      eps *= 0.5;
    }
    unreleasable_term_[best] = true;
    return false;
  }

  const DualProgram& dual_;
  SolverOptions options_;
  const Eigen::MatrixXd& E_;
  const Eigen::VectorXd& r_;
  Eigen::Index T_;
  Eigen::VectorXd delta_;
  std::vector<bool> free_;
  std::vector<bool> structural_zero_;
  std::vector<bool> pinned_;
  std::vector<bool> unreleasable_;
  std::vector<bool> term_pinned_;
  std::vector<bool> unreleasable_term_;
  std::vector<Eigen::Index> free_index_;
  Eigen::MatrixXd Ef_;
  Eigen::MatrixXd N_;
};

}  // namespace detail

/// Solves the dual. A trivial nullspace (the zero-dimensional case) is one
/// linear solve; otherwise Phase I followed by reduced Newton ascent.
inline DualSolution solve_dual(const DualProgram& dual, const SolverOptions& options = {}) {
  const Eigen::MatrixXd& E = dual.equality_matrix();
  const auto kernel = linalg::nullspace(E);
  if (kernel.basis.cols() == 0) {
    Eigen::VectorXd delta = linalg::min_norm_solve(E, dual.equality_rhs());
    if (dual.equality_residual(delta) > options.equality_tolerance) {
      throw Error(ErrorKind::kDualInfeasible,
                  "dual constraints are inconsistent: normality and orthogonality equations have no solution");
    }
    if (delta.minCoeff() < -1e-14) {
      throw Error(ErrorKind::kDualInfeasible,
                  "the unique solution of the dual constraints has a negative component");
    }
    delta = delta.cwiseMax(0.0);
    const Eigen::VectorXd lambda = dual.lambda(delta);
    for (Eigen::Index t = 0; t < delta.size(); ++t) {
      if (delta(t) <= 1e-14) detail::require_attainable(dual, static_cast<std::size_t>(t), lambda, options.active_threshold);
    }
    DualSolution solution;
    solution.point.delta = delta;
    solution.lambda = dual.lambda(delta);
    solution.log_value = log_dual_objective(dual, solution.point);
    solution.value = std::exp(solution.log_value);
    solution.equality_residual = dual.equality_residual(delta);
    solution.objective_trace.push_back(solution.log_value);
    return solution;
  }
  return detail::DualAscent(dual, options).run();
}

}  // namespace mogp
