#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mogp/dual.hpp"
#include "mogp/fixtures.hpp"
#include "mogp/scalarize.hpp"
#include "mogp/solver.hpp"
#include "reference_tables.hpp"

namespace mogp {
namespace {

using fixtures::term;

ScalarizedProgram example(const RawProblem& raw, double w1) {
  return scalarize(to_standard_form(raw), PreferenceWeights({w1, 1.0 - w1}));
}

GeometricProgram one_variable(std::vector<Monomial> objective, std::vector<Posynomial> constraints = {}) {
  return GeometricProgram(VariableSpace({"x"}), Posynomial(std::move(objective)), std::move(constraints));
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kInvalidArgument;
}

void expect_invariants(const DualProgram& dual, const DualSolution& s) {
  EXPECT_EQ(s.status, DualStatus::kOptimal);
  EXPECT_LE(s.equality_residual, 1e-10);
  EXPECT_LE(dual.equality_residual(s.point.delta), 1e-10);
  EXPECT_GE(s.point.delta.minCoeff(), 0.0);
  EXPECT_TRUE(s.lambda.isApprox(dual.lambda(s.point.delta)) || s.lambda.size() == 0);
  EXPECT_NEAR(s.log_value, log_dual_objective(dual, s.point), 1e-12);
  EXPECT_NEAR(s.value, std::exp(s.log_value), 1e-12 * s.value);
}

TEST(InteriorPoint, XPlusInverseIsMidpoint) {
  const auto dual = build_dual(one_variable({term(1, {1}), term(1, {-1})}));
  const auto ip = find_interior_point(dual);
  EXPECT_FALSE(ip.on_boundary);
  EXPECT_NEAR(ip.point.delta(0), 0.5, 1e-12);
  EXPECT_NEAR(ip.point.delta(1), 0.5, 1e-12);
  EXPECT_NEAR(ip.min_component, 0.5, 1e-12);
}

TEST(InteriorPoint, Example1StrictlyPositive) {
  const auto dual = build_dual(example(fixtures::example1(), 0.3));
  const auto ip = find_interior_point(dual);
  EXPECT_FALSE(ip.on_boundary);
  EXPECT_GT(ip.point.delta.minCoeff(), 0.0);
  EXPECT_NEAR(ip.point.delta.minCoeff(), ip.min_component, 1e-12);
  EXPECT_LE(dual.equality_residual(ip.point.delta), 1e-10);
}

TEST(InteriorPoint, NegativityForcedIsInfeasible) {
  // min x + x^2 + x^3: normality and orthogonality force a negative weight.
  const auto dual = build_dual(one_variable({term(1, {1}), term(1, {2}), term(1, {3})}));
  EXPECT_EQ(kind_of([&] { find_interior_point(dual); }), ErrorKind::kDualInfeasible);
  EXPECT_EQ(kind_of([&] { solve_dual(dual); }), ErrorKind::kDualInfeasible);
}

TEST(SolveDual, InconsistentEqualities) {
  // min x1 s.t. x1 x2 <= 1: the infimum 0 is not attained.
  const GeometricProgram gp(VariableSpace({"x1", "x2"}), Posynomial({term(1, {1, 0})}),
                            {Posynomial({term(1, {1, 1})})});
  EXPECT_EQ(kind_of([&] { solve_dual(build_dual(gp)); }), ErrorKind::kDualInfeasible);
}

TEST(SolveDual, UniqueSolutionWithNegativeComponent) {
  const auto dual = build_dual(one_variable({term(1, {1}), term(1, {2})}));
  EXPECT_EQ(kind_of([&] { solve_dual(dual); }), ErrorKind::kDualInfeasible);
}

TEST(SolveDual, InfeasiblePrimalIsUnbounded) {
  // x <= 1/2 and x >= 4 cannot both hold.
  const auto dual = build_dual(one_variable({term(1, {1})}, {Posynomial({term(2, {1})}), Posynomial({term(4, {-1})})}));
  EXPECT_EQ(kind_of([&] { solve_dual(dual); }), ErrorKind::kUnbounded);
}

TEST(SolveDual, XPlusInverse) {
  const auto dual = build_dual(one_variable({term(1, {1}), term(1, {-1})}));
  const auto s = solve_dual(dual);
  EXPECT_NEAR(s.value, 2.0, 2.0 * 1e-12);
  expect_invariants(dual, s);
}

TEST(SolveDual, TwoOverXPlusX) {
  const auto dual = build_dual(one_variable({term(2, {-1}), term(1, {1})}));
  const auto s = solve_dual(dual);
  EXPECT_NEAR(s.value, 2.0 * std::sqrt(2.0), 2.0 * std::sqrt(2.0) * 1e-12);
}

TEST(SolveDual, Example1Table) {
  for (std::size_t r = 0; r < reference::kW1.size(); ++r) {
    const auto dual = build_dual(example(fixtures::example1(), reference::kW1[r]));
    const auto s = solve_dual(dual);
    expect_invariants(dual, s);
    EXPECT_NEAR(s.value, reference::kExample1Z[r], 1e-3 * reference::kExample1Z[r]) << "row " << r;
    for (Eigen::Index t = 0; t < 8; ++t) {
      EXPECT_NEAR(s.point.delta(t), reference::kExample1Dual[r][static_cast<std::size_t>(t)], 2e-3)
          << "row " << r << " term " << t;
    }
  }
}

TEST(SolveDual, Example2TableWithBoundaryComponent) {
  for (std::size_t r = 0; r < reference::kW1.size(); ++r) {
    const auto dual = build_dual(example(fixtures::example2(), reference::kW1[r]));
    const auto s = solve_dual(dual);
    expect_invariants(dual, s);
    EXPECT_NEAR(s.value, reference::kExample2Z[r], 1e-3 * reference::kExample2Z[r]) << "row " << r;
    for (Eigen::Index t = 0; t < 6; ++t) {
      EXPECT_NEAR(s.point.delta(t), reference::kExample2Dual[r][static_cast<std::size_t>(t)], 2e-3)
          << "row " << r << " term " << t;
    }
  }
  const auto s = solve_dual(build_dual(example(fixtures::example2(), 0.1)));
  EXPECT_EQ(s.point.delta(5), 0.0);
  EXPECT_EQ(s.lambda(1), 0.0);
}

TEST(SolveDual, Deterministic) {
  const auto dual = build_dual(example(fixtures::example1(), 0.2));
  const auto a = solve_dual(dual);
  const auto b = solve_dual(dual);
  EXPECT_EQ(a.point.delta, b.point.delta);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolveDual, AscentTraceIsMonotone) {
  for (const auto& raw : {fixtures::example1(), fixtures::example2()}) {
    for (double w1 : reference::kW1) {
      const auto s = solve_dual(build_dual(example(raw, w1)));
      ASSERT_FALSE(s.objective_trace.empty());
      for (std::size_t i = 1; i < s.objective_trace.size(); ++i) {
        EXPECT_GE(s.objective_trace[i], s.objective_trace[i - 1] - 1e-12);
      }
      EXPECT_NEAR(s.objective_trace.back(), s.log_value, 1e-12);
    }
  }
}

TEST(SolveDual, ReportsMaxIterations) {
  SolverOptions options;
  options.max_iterations = 1;
  const auto s = solve_dual(build_dual(example(fixtures::example1(), 0.3)), options);
  EXPECT_EQ(s.status, DualStatus::kMaxIterations);
  EXPECT_EQ(s.iterations, 1);
}

TEST(SolveDual, ValueScalesWithObjective) {
  // Multiplying every objective coefficient by a multiplies the optimum by a.
  const auto base = example(fixtures::example1(), 0.5);
  const double v = solve_dual(build_dual(base)).value;
  for (double a : {0.01, 3.0, 250.0}) {
    const GeometricProgram scaled(base.program.variables(), base.program.objective().scaled(a),
                                  base.program.constraints());
    EXPECT_NEAR(solve_dual(build_dual(scaled)).value, a * v, 1e-8 * a * v);
  }
}

TEST(SolveDual, OptimumDominatesFeasibleDualPoints) {
  const auto dual = build_dual(example(fixtures::example1(), 0.4));
  const auto s = solve_dual(dual);
  const auto ip = find_interior_point(dual);
  const auto kernel = linalg::nullspace(dual.equality_matrix());
  ASSERT_EQ(kernel.basis.cols(), 3);
  for (int k = 0; k < 3; ++k) {
    for (double step : {-0.01, 0.01}) {
      const Eigen::VectorXd d = ip.point.delta + step * kernel.basis.col(k);
      if (d.minCoeff() <= 0.0) continue;
      EXPECT_LE(log_dual_objective(dual, {d}), s.log_value + 1e-12);
    }
  }
  EXPECT_LE(log_dual_objective(dual, ip.point), s.log_value);
}

}  // namespace
}  // namespace mogp
