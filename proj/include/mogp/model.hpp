#pragma once

// Posynomial program representation.
//
//   min  g_k0(x) = sum_t c_k0t prod_j x_j^a_k0tj      k = 1..p
//   s.t. g_i(x)  = sum_t c_it  prod_j x_j^d_itj <= 1  i = 1..m
//        x_j > 0
//
// Exponents are dense per term; variables are addressed by declaration order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mogp/error.hpp"

namespace mogp {

class VariableSpace {
 public:
  VariableSpace() = default;

  explicit VariableSpace(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "a program needs at least one variable");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names_) {
      if (name.empty()) {
        throw Error(ErrorKind::kInvalidArgument, "variable names must be non-empty");
      }
      if (!seen.insert(name).second) {
        throw Error(ErrorKind::kInvalidArgument, "duplicate variable name '" + name + "'");
      }
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t j) const { return names_.at(j); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  friend bool operator==(const VariableSpace&, const VariableSpace&) = default;

 private:
  std::vector<std::string> names_;
};

/// c * prod_j x_j^e_j with c > 0.
class Monomial {
 public:
  Monomial(double coefficient, std::vector<double> exponents)
      : coefficient_(coefficient), exponents_(std::move(exponents)) {
    if (!(coefficient_ > 0.0) || !std::isfinite(coefficient_)) {
      throw Error(ErrorKind::kDomain, "posynomial coefficient must be positive");
    }
    for (double e : exponents_) {
      if (!std::isfinite(e)) throw Error(ErrorKind::kDomain, "exponents must be finite");
    }
  }

  double coefficient() const noexcept { return coefficient_; }
  const std::vector<double>& exponents() const noexcept { return exponents_; }
  double exponent(std::size_t j) const { return exponents_.at(j); }
  std::size_t dimension() const noexcept { return exponents_.size(); }

  // Caller guarantees x > 0 and matching dimension.
  double evaluate_unchecked(std::span<const double> x) const {
    double log_value = std::log(coefficient_);
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      if (exponents_[j] != 0.0) log_value += exponents_[j] * std::log(x[j]);
    }
    return std::exp(log_value);
  }

  Monomial scaled(double factor) const { return Monomial(coefficient_ * factor, exponents_); }

  Monomial reciprocal() const {
    std::vector<double> negated(exponents_.size());
    std::transform(exponents_.begin(), exponents_.end(), negated.begin(),
                   [](double e) { return e == 0.0 ? 0.0 : -e; });
    return Monomial(1.0 / coefficient_, std::move(negated));
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  double coefficient_;
  std::vector<double> exponents_;
};

class Posynomial {
 public:
  explicit Posynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "a posynomial needs at least one term");
    }
    const auto n = terms_.front().dimension();
    for (const auto& term : terms_) {
      if (term.dimension() != n) {
        throw Error(ErrorKind::kDimensionMismatch, "posynomial terms have differing dimensions");
      }
    }
  }

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t dimension() const noexcept { return terms_.front().dimension(); }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  const Monomial& term(std::size_t t) const { return terms_.at(t); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }

  double evaluate_unchecked(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& term : terms_) sum += term.evaluate_unchecked(x);
    return sum;
  }

  Posynomial scaled(double factor) const {
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& term : terms_) out.push_back(term.scaled(factor));
    return Posynomial(std::move(out));
  }

  friend bool operator==(const Posynomial&, const Posynomial&) = default;

 private:
  std::vector<Monomial> terms_;
};

/// Sum of c_t prod_j x_j^e_tj. Throws kDomain unless every x_j > 0.
inline double evaluate_posynomial(const Posynomial& g, std::span<const double> x) {
  if (x.size() != g.dimension()) {
    throw Error(ErrorKind::kDimensionMismatch, "point dimension does not match posynomial");
  }
  for (double xj : x) {
    if (!(xj > 0.0) || !std::isfinite(xj)) {
      throw Error(ErrorKind::kDomain, "posynomials are only defined for strictly positive x");
    }
  }
  return g.evaluate_unchecked(x);
}

enum class Sense { kMinimize, kMaximize };

struct RawObjective {
  Posynomial posynomial;
  Sense sense = Sense::kMinimize;

  friend bool operator==(const RawObjective&, const RawObjective&) = default;
};

/// g(x) <= bound.
struct RawConstraint {
  Posynomial posynomial;
  double bound = 1.0;

  friend bool operator==(const RawConstraint&, const RawConstraint&) = default;
};

/// Single-objective standard-form program (objective minimized, constraints <= 1).
class GeometricProgram {
 public:
  GeometricProgram(VariableSpace variables, Posynomial objective, std::vector<Posynomial> constraints)
      : variables_(std::move(variables)),
        objective_(std::move(objective)),
        constraints_(std::move(constraints)) {
    if (objective_.dimension() != variables_.size()) {
      throw Error(ErrorKind::kDimensionMismatch, "objective dimension does not match variables");
    }
    for (const auto& g : constraints_) {
      if (g.dimension() != variables_.size()) {
        throw Error(ErrorKind::kDimensionMismatch, "constraint dimension does not match variables");
      }
    }
  }

  const VariableSpace& variables() const noexcept { return variables_; }
  const Posynomial& objective() const noexcept { return objective_; }
  const std::vector<Posynomial>& constraints() const noexcept { return constraints_; }
  std::size_t num_variables() const noexcept { return variables_.size(); }
  std::size_t num_constraints() const noexcept { return constraints_.size(); }

  std::size_t num_terms() const noexcept {
    std::size_t total = objective_.size();
    for (const auto& g : constraints_) total += g.size();
    return total;
  }

 private:
  VariableSpace variables_;
  Posynomial objective_;
  std::vector<Posynomial> constraints_;
};

/// p minimized objectives over shared variables, m constraints in <= 1 form.
class MultiObjectiveProgram {
 public:
  MultiObjectiveProgram(VariableSpace variables, std::vector<Posynomial> objectives,
                        std::vector<Posynomial> constraints)
      : variables_(std::move(variables)),
        objectives_(std::move(objectives)),
        constraints_(std::move(constraints)) {
    if (objectives_.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "a program needs at least one objective");
    }
    const auto n = variables_.size();
    for (const auto& g : objectives_) {
      if (g.dimension() != n) {
        throw Error(ErrorKind::kDimensionMismatch, "objective dimension does not match variables");
      }
    }
    for (const auto& g : constraints_) {
      if (g.dimension() != n) {
        throw Error(ErrorKind::kDimensionMismatch, "constraint dimension does not match variables");
      }
    }
  }

  const VariableSpace& variables() const noexcept { return variables_; }
  const std::vector<Posynomial>& objectives() const noexcept { return objectives_; }
  const std::vector<Posynomial>& constraints() const noexcept { return constraints_; }
  std::size_t num_objectives() const noexcept { return objectives_.size(); }
  std::size_t num_constraints() const noexcept { return constraints_.size(); }
  std::size_t num_variables() const noexcept { return variables_.size(); }

  std::size_t num_terms() const noexcept {
    std::size_t total = 0;
    for (const auto& g : objectives_) total += g.size();
    for (const auto& g : constraints_) total += g.size();
    return total;
  }

  friend bool operator==(const MultiObjectiveProgram&, const MultiObjectiveProgram&) = default;

 private:
  VariableSpace variables_;
  std::vector<Posynomial> objectives_;
  std::vector<Posynomial> constraints_;
};

/// Rewrites maximize-monomials as minimized reciprocals and divides each
/// constraint by its bound.
inline MultiObjectiveProgram to_standard_form(const std::vector<RawObjective>& objectives,
                                              const std::vector<RawConstraint>& constraints,
                                              const VariableSpace& variables) {
  std::vector<Posynomial> standard_objectives;
  standard_objectives.reserve(objectives.size());
  for (std::size_t k = 0; k < objectives.size(); ++k) {
    const auto& objective = objectives[k];
    if (objective.sense == Sense::kMinimize) {
      standard_objectives.push_back(objective.posynomial);
      continue;
    }
    if (!objective.posynomial.is_monomial()) {
      throw Error(ErrorKind::kNotConvertible,
                  "objective " + std::to_string(k + 1) +
                      ": only monomial objectives can be maximized (found " +
                      std::to_string(objective.posynomial.size()) + " terms)");
    }
    standard_objectives.emplace_back(std::vector<Monomial>{objective.posynomial.term(0).reciprocal()});
  }

  std::vector<Posynomial> standard_constraints;
  standard_constraints.reserve(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const double bound = constraints[i].bound;
    if (!(bound > 0.0) || !std::isfinite(bound)) {
      throw Error(ErrorKind::kDomain,
                  "constraint " + std::to_string(i + 1) + ": bound must be positive");
    }
    standard_constraints.push_back(bound == 1.0 ? constraints[i].posynomial
                                                : constraints[i].posynomial.scaled(1.0 / bound));
  }
  return MultiObjectiveProgram(variables, std::move(standard_objectives),
                               std::move(standard_constraints));
}

/// A program as authored: mixed senses, arbitrary positive bounds.
struct RawProblem {
  VariableSpace variables;
  std::vector<RawObjective> objectives;
  std::vector<RawConstraint> constraints;

  friend bool operator==(const RawProblem&, const RawProblem&) = default;
};

inline MultiObjectiveProgram to_standard_form(const RawProblem& problem) {
  return to_standard_form(problem.objectives, problem.constraints, problem.variables);
}

/// Total terms - n - 1. Objective terms are counted per objective, which is
/// the count of the scalarized program since scalarization never merges terms.
inline long degree_of_difficulty(const MultiObjectiveProgram& program) {
  return static_cast<long>(program.num_terms()) - static_cast<long>(program.num_variables()) - 1;
}

inline long degree_of_difficulty(const GeometricProgram& program) {
  return static_cast<long>(program.num_terms()) - static_cast<long>(program.num_variables()) - 1;
}

}  // namespace mogp
