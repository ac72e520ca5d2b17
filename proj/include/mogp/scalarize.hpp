#pragma once

// Weighted-sum scalarization: Z(x) = sum_k w_k g_k0(x), with w on the open
// unit simplex. Terms of different objectives are never merged.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mogp/error.hpp"
#include "mogp/model.hpp"

namespace mogp {

class PreferenceWeights {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit PreferenceWeights(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw Error(ErrorKind::kInvalidWeights, "weights must not be empty");
    for (double wk : w_) {
      if (!(wk > 0.0) || !std::isfinite(wk)) {
        throw Error(ErrorKind::kInvalidWeights, "every preference weight must be positive");
      }
    }
    const double sum = std::accumulate(w_.begin(), w_.end(), 0.0);
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw Error(ErrorKind::kInvalidWeights, "preference weights must sum to 1");
    }
  }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t k) const { return w_.at(k); }
  const std::vector<double>& values() const noexcept { return w_; }

  friend bool operator==(const PreferenceWeights&, const PreferenceWeights&) = default;

 private:
  std::vector<double> w_;
};

/// Where a scalarized objective term came from.
struct TermSource {
  std::size_t objective = 0;  // k (0-based)
  std::size_t term = 0;       // t within objective k (0-based)
  double original_coefficient = 0.0;
};

/// Single-objective program plus the bookkeeping needed to evaluate the
/// original objectives at a recovered point.
struct ScalarizedProgram {
  GeometricProgram program;
  std::vector<TermSource> provenance;     // one entry per objective term of `program`
  std::vector<double> objective_weights;  // w_k; a unit vector for ideal-point solves
  MultiObjectiveProgram source;
};

inline ScalarizedProgram scalarize_with(const MultiObjectiveProgram& program,
                                        const std::vector<double>& weights) {
  if (weights.size() != program.num_objectives()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "expected " + std::to_string(program.num_objectives()) + " weights, got " +
                    std::to_string(weights.size()));
  }
  std::vector<Monomial> terms;
  std::vector<TermSource> provenance;
  for (std::size_t k = 0; k < program.num_objectives(); ++k) {
    if (weights[k] == 0.0) continue;
    const auto& objective = program.objectives()[k];
    for (std::size_t t = 0; t < objective.size(); ++t) {
      const auto& term = objective.term(t);
      terms.push_back(term.scaled(weights[k]));
      provenance.push_back({k, t, term.coefficient()});
    }
  }
  return ScalarizedProgram{
      GeometricProgram(program.variables(), Posynomial(std::move(terms)), program.constraints()),
      std::move(provenance), weights, program};
}

inline ScalarizedProgram scalarize(const MultiObjectiveProgram& program, const PreferenceWeights& w) {
  return scalarize_with(program, w.values());
}

/// Objective k alone, same constraints.
inline ScalarizedProgram single_objective(const MultiObjectiveProgram& program, std::size_t k) {
  if (k >= program.num_objectives()) {
    throw Error(ErrorKind::kInvalidArgument, "objective index out of range");
  }
  std::vector<double> unit(program.num_objectives(), 0.0);
  unit[k] = 1.0;
  return scalarize_with(program, unit);
}

/// Strict-interior lattice points of the p-simplex with spacing `step`, in
/// lexicographic order.
inline std::vector<PreferenceWeights> weight_grid(std::size_t p, double step) {
  if (p == 0) throw Error(ErrorKind::kInvalidArgument, "p must be at least 1");
  if (!(step > 0.0 && step < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "weight step must lie in (0, 1)");
  }
  const double divisions_real = 1.0 / step;
  const double divisions_rounded = std::round(divisions_real);
  if (std::abs(divisions_real - divisions_rounded) > 1e-9) {
    throw Error(ErrorKind::kInvalidArgument, "1/step must be an integer");
  }
  const auto divisions = static_cast<std::size_t>(divisions_rounded);

  std::vector<PreferenceWeights> grid;
  if (divisions < p) return grid;
  std::vector<std::size_t> parts(p, 1);

  // Enumerate compositions of `divisions` into p positive parts.
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t index, std::size_t left) {
    if (index + 1 == p) {
      parts[index] = left;
      std::vector<double> w(p);
      for (std::size_t k = 0; k < p; ++k) {
        w[k] = static_cast<double>(parts[k]) / static_cast<double>(divisions);
      }
      grid.emplace_back(std::move(w));
      return;
    }
    const std::size_t remaining_slots = p - index - 1;
    for (std::size_t v = 1; v + remaining_slots <= left; ++v) {
      parts[index] = v;
      fill(index + 1, left - v);
    }
  };
  fill(0, divisions);
  return grid;
}

/// Sum_k w_k g_k0(x) evaluated objective by objective.
inline double weighted_objective(const MultiObjectiveProgram& program, const std::vector<double>& weights,
                                 std::span<const double> x) {
  double z = 0.0;
  for (std::size_t k = 0; k < program.num_objectives(); ++k) {
    if (weights.at(k) != 0.0) z += weights[k] * evaluate_posynomial(program.objectives()[k], x);
  }
  return z;
}

}  // namespace mogp
