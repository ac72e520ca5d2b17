#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mogp/fixtures.hpp"
#include "mogp/scalarize.hpp"

namespace mogp {
namespace {

std::vector<double> coefficients(const ScalarizedProgram& sp) {
  std::vector<double> out;
  for (const auto& t : sp.program.objective().terms()) out.push_back(t.coefficient());
  return out;
}

TEST(PreferenceWeights, OpenSimplexOnly) {
  EXPECT_NO_THROW(PreferenceWeights({0.3, 0.7}));
  EXPECT_THROW(PreferenceWeights({0.0, 1.0}), Error);
  EXPECT_THROW(PreferenceWeights({0.5, 0.6}), Error);
  EXPECT_THROW(PreferenceWeights(std::vector<double>{}), Error);
  try {
    PreferenceWeights({-0.1, 1.1});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidWeights);
  }
}

TEST(Scalarize, Example1Coefficients) {
  const auto program = to_standard_form(fixtures::example1());
  const auto sp = scalarize(program, PreferenceWeights({0.3, 0.7}));
  const std::vector<double> expected{4 * 0.3, 10 * 0.3, 4 * 0.3, 2 * 0.3, 0.7};
  const auto got = coefficients(sp);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t t = 0; t < got.size(); ++t) EXPECT_DOUBLE_EQ(got[t], expected[t]);
  ASSERT_EQ(sp.provenance.size(), 5u);
  EXPECT_EQ(sp.provenance[4].objective, 1u);
  EXPECT_EQ(sp.provenance[4].term, 0u);
  for (std::size_t t = 0; t < got.size(); ++t) {
    const auto& src = sp.provenance[t];
    EXPECT_DOUBLE_EQ(got[t], sp.objective_weights[src.objective] * src.original_coefficient);
  }
  EXPECT_EQ(sp.program.constraints(), program.constraints());
}

TEST(Scalarize, SingleObjectiveUnchanged) {
  VariableSpace vars({"x"});
  const Posynomial g({fixtures::term(2, {1}), fixtures::term(3, {-1})});
  const MultiObjectiveProgram program(vars, {g}, {});
  EXPECT_EQ(scalarize(program, PreferenceWeights({1.0})).program.objective(), g);
}

TEST(Scalarize, Example2EqualWeights) {
  const auto sp = scalarize(to_standard_form(fixtures::example2()), PreferenceWeights({0.5, 0.5}));
  EXPECT_EQ(coefficients(sp), (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(Scalarize, DimensionMismatch) {
  const auto program = to_standard_form(fixtures::example1());
  try {
    scalarize(program, PreferenceWeights({1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionMismatch);
  }
}

TEST(Scalarize, MatchesWeightedSumOfObjectives) {
  const auto program = to_standard_form(fixtures::example1());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> logx(-1.0, 2.5);
  std::uniform_real_distribution<double> w1(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = w1(rng);
    const auto sp = scalarize(program, PreferenceWeights({a, 1.0 - a}));
    std::vector<double> x(4);
    for (auto& v : x) v = std::exp(logx(rng));
    const double z = evaluate_posynomial(sp.program.objective(), x);
    const double expected = a * evaluate_posynomial(program.objectives()[0], x) +
                            (1.0 - a) * evaluate_posynomial(program.objectives()[1], x);
    EXPECT_NEAR(z, expected, 1e-12 * expected);
  }
}

TEST(Scalarize, LinearInWeights) {
  const auto program = to_standard_form(fixtures::example2());
  const PreferenceWeights w({0.2, 0.8});
  const PreferenceWeights v({0.7, 0.3});
  for (double alpha : {0.1, 0.5, 0.9}) {
    const PreferenceWeights mix({alpha * 0.2 + (1 - alpha) * 0.7, alpha * 0.8 + (1 - alpha) * 0.3});
    const auto cw = coefficients(scalarize(program, w));
    const auto cv = coefficients(scalarize(program, v));
    const auto cm = coefficients(scalarize(program, mix));
    for (std::size_t t = 0; t < cm.size(); ++t) EXPECT_NEAR(cm[t], alpha * cw[t] + (1 - alpha) * cv[t], 1e-15);
  }
}

TEST(WeightGrid, TwoObjectivesTenthSteps) {
  const auto grid = weight_grid(2, 0.1);
  ASSERT_EQ(grid.size(), 9u);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(grid[i][0], 0.1 * static_cast<double>(i + 1), 1e-15);
    EXPECT_NEAR(grid[i][1], 1.0 - 0.1 * static_cast<double>(i + 1), 1e-15);
  }
}

TEST(WeightGrid, HalfStepSinglePoint) {
  const auto grid = weight_grid(2, 0.5);
  ASSERT_EQ(grid.size(), 1u);
  EXPECT_EQ(grid[0].values(), (std::vector<double>{0.5, 0.5}));
}

TEST(WeightGrid, ThreeObjectivesMatchesEnumeration) {
  // Oracle: all triples from {0, 0.25, ..., 1}^3 with positive entries summing to 1.
  std::vector<std::vector<double>> expected;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 4; ++c)
        if (a > 0 && b > 0 && c > 0 && a + b + c == 4) expected.push_back({a / 4.0, b / 4.0, c / 4.0});
  const auto grid = weight_grid(3, 0.25);
  ASSERT_EQ(grid.size(), expected.size());
  ASSERT_EQ(grid.size(), 3u);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(grid[i].values(), expected[i]);
}

TEST(WeightGrid, RejectsBadSteps) {
  EXPECT_THROW(weight_grid(2, 0.0), Error);
  EXPECT_THROW(weight_grid(2, 1.0), Error);
  EXPECT_THROW(weight_grid(2, 0.3), Error);
}

TEST(WeightGrid, EveryPointIsValid) {
  for (std::size_t p = 1; p <= 4; ++p) {
    for (double step : {0.05, 0.1, 0.125, 0.2}) {
      for (const auto& w : weight_grid(p, step)) {
        EXPECT_NO_THROW(PreferenceWeights(w.values()));
      }
    }
  }
}

TEST(SingleObjective, DropsOtherObjectives) {
  const auto program = to_standard_form(fixtures::example2());
  const auto sp = single_objective(program, 1);
  EXPECT_EQ(sp.program.objective(), program.objectives()[1]);
  EXPECT_EQ(sp.objective_weights, (std::vector<double>{0.0, 1.0}));
}

}  // namespace
}  // namespace mogp
