#pragma once

// Dual of a single-objective posynomial program.
//
//   max  ln V(delta) = sum_t delta_t (ln c_t - ln delta_t) + sum_i lambda_i ln lambda_i
//   s.t. sum_{t in objective} delta_t = 1                    (normality)
//        sum_t a_tj delta_t = 0,  j = 1..n                   (orthogonality)
//        delta >= 0,  lambda_i = sum_{t in constraint i} delta_t
//
// One dual variable per primal term; objective terms come first, then the
// terms of each constraint in order.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mogp/error.hpp"
#include "mogp/model.hpp"
#include "mogp/scalarize.hpp"

namespace mogp {

struct DualPoint {
  Eigen::VectorXd delta;
};

class DualProgram {
 public:
  explicit DualProgram(const GeometricProgram& program) {
    const std::size_t n = program.num_variables();
    const std::size_t total = program.num_terms();
    num_constraints_ = program.num_constraints();
    coeffs_.resize(static_cast<Eigen::Index>(total));
    exponents_.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(n));
    groups_.reserve(total);
    group_terms_.resize(num_constraints_ + 1);

    Eigen::Index row = 0;
    auto append = [&](const Posynomial& g, std::size_t group) {
      for (const auto& term : g.terms()) {
        coeffs_(row) = term.coefficient();
        for (std::size_t j = 0; j < n; ++j) {
          exponents_(row, static_cast<Eigen::Index>(j)) = term.exponent(j);
        }
        groups_.push_back(group);
        group_terms_[group].push_back(static_cast<std::size_t>(row));
        ++row;
      }
    };
    append(program.objective(), 0);
    for (std::size_t i = 0; i < num_constraints_; ++i) append(program.constraints()[i], i + 1);

    equality_.setZero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(total));
    for (std::size_t t : group_terms_[0]) equality_(0, static_cast<Eigen::Index>(t)) = 1.0;
    equality_.bottomRows(static_cast<Eigen::Index>(n)) = exponents_.transpose();
    rhs_.setZero(static_cast<Eigen::Index>(n + 1));
    rhs_(0) = 1.0;
  }

  std::size_t num_terms() const noexcept { return groups_.size(); }
  std::size_t num_variables() const noexcept { return static_cast<std::size_t>(exponents_.cols()); }
  std::size_t num_constraints() const noexcept { return num_constraints_; }
  std::size_t num_objective_terms() const noexcept { return group_terms_[0].size(); }

  const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  const Eigen::MatrixXd& exponents() const noexcept { return exponents_; }
  /// (n+1) x T; row 0 is normality, row j is orthogonality for variable j.
  const Eigen::MatrixXd& equality_matrix() const noexcept { return equality_; }
  const Eigen::VectorXd& equality_rhs() const noexcept { return rhs_; }

  /// 0 for objective terms, i for terms of constraint i (1-based).
  std::size_t group(std::size_t t) const { return groups_.at(t); }
  const std::vector<std::size_t>& groups() const noexcept { return groups_; }
  const std::vector<std::size_t>& group_terms(std::size_t group) const { return group_terms_.at(group); }

  long degree_of_difficulty() const noexcept {
    return static_cast<long>(num_terms()) - static_cast<long>(num_variables()) - 1;
  }

  /// lambda_i for i = 1..m (returned 0-based).
  Eigen::VectorXd lambda(const Eigen::VectorXd& delta) const {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_constraints_));
    for (std::size_t t = 0; t < groups_.size(); ++t) {
      if (groups_[t] > 0) sums(static_cast<Eigen::Index>(groups_[t] - 1)) += delta(static_cast<Eigen::Index>(t));
    }
    return sums;
  }

  double equality_residual(const Eigen::VectorXd& delta) const {
    return (equality_ * delta - rhs_).lpNorm<Eigen::Infinity>();
  }

 private:
  Eigen::VectorXd coeffs_;
  Eigen::MatrixXd exponents_;
  Eigen::MatrixXd equality_;
  Eigen::VectorXd rhs_;
  std::vector<std::size_t> groups_;
  std::vector<std::vector<std::size_t>> group_terms_;
  std::size_t num_constraints_ = 0;
};

inline DualProgram build_dual(const GeometricProgram& program) { return DualProgram(program); }

/// Preference weights are already folded into the effective coefficients.
inline DualProgram build_dual(const ScalarizedProgram& scalarized) {
  return DualProgram(scalarized.program);
}

namespace detail {

inline double x_log_x(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

inline void check_point(const DualProgram& dual, const DualPoint& point) {
  if (static_cast<std::size_t>(point.delta.size()) != dual.num_terms()) {
    throw Error(ErrorKind::kDimensionMismatch, "dual point has the wrong number of components");
  }
}

}  // namespace detail

/// ln V at delta, with 0 ln 0 = 0.
inline double log_dual_objective(const DualProgram& dual, const DualPoint& point) {
  detail::check_point(dual, point);
  const auto& delta = point.delta;
  double value = 0.0;
  for (Eigen::Index t = 0; t < delta.size(); ++t) {
    const double d = delta(t);
    if (d < 0.0) throw Error(ErrorKind::kDomain, "dual variables must be non-negative");
    if (d > 0.0) value += d * (std::log(dual.coeffs()(t)) - std::log(d));
  }
  const Eigen::VectorXd lambda = dual.lambda(delta);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) value += detail::x_log_x(lambda(i));
  return value;
}

/// d(ln V)/d(delta_t) = ln c_t - ln delta_t - 1 (+ ln lambda_i + 1 for constraint terms).
/// Defined only in the interior.
inline Eigen::VectorXd log_dual_gradient(const DualProgram& dual, const DualPoint& point) {
  detail::check_point(dual, point);
  const auto& delta = point.delta;
  for (Eigen::Index t = 0; t < delta.size(); ++t) {
    if (!(delta(t) > 0.0)) {
      throw Error(ErrorKind::kDomain, "log-dual gradient is undefined on the boundary delta_t = 0");
    }
  }
  const Eigen::VectorXd lambda = dual.lambda(delta);
  Eigen::VectorXd gradient(delta.size());
  for (Eigen::Index t = 0; t < delta.size(); ++t) {
    gradient(t) = std::log(dual.coeffs()(t)) - std::log(delta(t)) - 1.0;
    const std::size_t g = dual.group(static_cast<std::size_t>(t));
    if (g > 0) gradient(t) += std::log(lambda(static_cast<Eigen::Index>(g - 1))) + 1.0;
  }
  return gradient;
}

}  // namespace mogp
