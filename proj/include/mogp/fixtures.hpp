#pragma once

// Built-in reference problems. The same programs ship as documents under data/.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mogp/model.hpp"

namespace mogp::fixtures {

inline Monomial term(double coefficient, std::vector<double> exponents) {
  return Monomial(coefficient, std::move(exponents));
}

/// min 4x1 + 10x2 + 4x3 + 2x4, max x1 x2 x3
/// s.t. x1^2 x4^-2 + x2^2 x4^-2 <= 1, 100 x1^-1 x2^-1 x3^-1 <= 1.
inline RawProblem example1() {
  VariableSpace vars({"x1", "x2", "x3", "x4"});
  std::vector<RawObjective> objectives{
      {Posynomial({term(4, {1, 0, 0, 0}), term(10, {0, 1, 0, 0}), term(4, {0, 0, 1, 0}),
                   term(2, {0, 0, 0, 1})}),
       Sense::kMinimize},
      {Posynomial({term(1, {1, 1, 1, 0})}), Sense::kMaximize},
  };
  std::vector<RawConstraint> constraints{
      {Posynomial({term(1, {2, 0, 0, -2}), term(1, {0, 2, 0, -2})}), 1.0},
      {Posynomial({term(100, {-1, -1, -1, 0})}), 1.0},
  };
  return {vars, objectives, constraints};
}

namespace detail {

inline RawProblem example2_with_f1_x3_exponent(double x3_exponent) {
  VariableSpace vars({"x1", "x2", "x3"});
  std::vector<RawObjective> objectives{
      {Posynomial({term(1, {-1, -1, x3_exponent})}), Sense::kMinimize},
      {Posynomial({term(1, {-1, -3, -5}), term(1, {-1, -1, 0})}), Sense::kMinimize},
  };
  std::vector<RawConstraint> constraints{
      {Posynomial({term(1, {1, 1, 2}), term(1, {0, 1, 1})}), 6.0},
      {Posynomial({term(1, {1, 0, 1})}), 1.0},
  };
  return {vars, objectives, constraints};
}

}  // namespace detail

/// f1 = x1^-1 x2^-1 x3^-2: the form consistent with the reference dual
/// system, dual/primal tables and the ideal value 1/3.
inline RawProblem example2() { return detail::example2_with_f1_x3_exponent(-2.0); }

/// f1 = x1^-1 x2^-1 x3^-1. Does not reproduce the reference tables.
inline RawProblem example2_verbatim() { return detail::example2_with_f1_x3_exponent(-1.0); }

inline std::optional<RawProblem> builtin(std::string_view name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example2-verbatim") return example2_verbatim();
  return std::nullopt;
}

}  // namespace mogp::fixtures
