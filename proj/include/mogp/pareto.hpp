#pragma once

// Weight sweeps, ideal points and non-dominance flags.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mogp/dual.hpp"
#include "mogp/error.hpp"
#include "mogp/model.hpp"
#include "mogp/recovery.hpp"
#include "mogp/scalarize.hpp"
#include "mogp/solver.hpp"

namespace mogp {

struct Failure {
  ErrorKind kind = ErrorKind::kInvalidArgument;
  std::string message;
};

/// One pipeline run: scalarize, dual, solve, recover, verify. A run whose
/// certificate fails is recorded as a failure with its results attached.
struct PipelineResult {
  std::optional<DualSolution> dual;
  std::optional<PrimalSolution> primal;
  std::optional<VerificationReport> report;
  std::optional<Failure> failure;

  bool ok() const noexcept { return !failure.has_value(); }
};

/// Largest duality gap and constraint violation a pipeline run may report.
constexpr double kCertificateTolerance = 1e-6;

inline PipelineResult run_pipeline(const ScalarizedProgram& scalarized, const SolverOptions& options) {
  PipelineResult result;
  try {
    const DualProgram program = build_dual(scalarized);
    result.dual = solve_dual(program, options);
    if (result.dual->status != DualStatus::kOptimal) {
      result.failure = Failure{ErrorKind::kMaxIterations,
                               "dual solver stopped after " + std::to_string(result.dual->iterations) +
                                   " iterations without converging"};
      return result;
    }
    result.primal = recover_primal(*result.dual, scalarized, options);
    result.report = verify(*result.primal, *result.dual, scalarized, options);
    if (!(result.report->duality_gap <= kCertificateTolerance) ||
        !(result.report->max_constraint_violation <= kCertificateTolerance)) {
      result.failure = Failure{ErrorKind::kInconsistentCertificate,
                               "certificate rejected: duality gap " + std::to_string(result.report->duality_gap) +
                                   ", constraint violation " +
                                   std::to_string(result.report->max_constraint_violation)};
    }
  } catch (const Error& e) {
    result.failure = Failure{e.kind(), e.what()};
  }
  return result;
}

struct ParetoPoint {
  PreferenceWeights weights;
  PipelineResult result;
  std::vector<double> objective_vector;  // empty when the point failed
  double Z = 0.0;

  bool ok() const noexcept { return result.ok(); }
};

struct IdealPoint {
  std::size_t objective = 0;
  double value = 0.0;
  std::vector<double> witness;
  bool unique = true;
  PipelineResult result;

  bool ok() const noexcept { return result.ok(); }
};

struct SweepReport {
  std::vector<ParetoPoint> points;
  std::vector<bool> nondominated;
  std::vector<IdealPoint> ideal;

  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const ParetoPoint& p) { return !p.ok(); }));
  }
};

/// flag_i is false iff some other vector is <= v_i everywhere and lower by
/// more than 1e-9 somewhere. Exact duplicates are all kept.
inline std::vector<bool> dominance_filter(const std::vector<std::vector<double>>& vectors) {
  constexpr double kTolerance = 1e-9;
  if (!vectors.empty()) {
    const auto p = vectors.front().size();
    for (const auto& v : vectors) {
      if (v.size() != p) throw Error(ErrorKind::kDimensionMismatch, "objective vectors are ragged");
    }
  }
  std::vector<bool> flags(vectors.size(), true);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = 0; j < vectors.size() && flags[i]; ++j) {
      if (i == j) continue;
      bool no_worse = true;
      bool better = false;
      for (std::size_t k = 0; k < vectors[i].size(); ++k) {
        if (vectors[j][k] > vectors[i][k] + kTolerance) no_worse = false;
        if (vectors[j][k] < vectors[i][k] - kTolerance) better = true;
      }
      if (no_worse && better) flags[i] = false;
    }
  }
  return flags;
}

/// Each objective minimized alone under the shared constraints.
inline std::vector<IdealPoint> ideal_points(const MultiObjectiveProgram& program, const SolverOptions& options = {}) {
  std::vector<IdealPoint> ideal;
  for (std::size_t k = 0; k < program.num_objectives(); ++k) {
    IdealPoint point;
    point.objective = k;
    point.result = run_pipeline(single_objective(program, k), options);
    if (point.result.ok()) {
      point.value = point.result.primal->objective_values[k];
      point.witness = point.result.primal->x;
      point.unique = point.result.primal->unique;
    }
    ideal.push_back(std::move(point));
  }
  return ideal;
}

/// Runs the pipeline at every grid point. With `workers` > 1 the points are
/// solved concurrently; the report is identical to a sequential run.
inline SweepReport sweep(const MultiObjectiveProgram& program, const std::vector<PreferenceWeights>& grid,
                         const SolverOptions& options = {}, unsigned workers = 1) {
  if (grid.empty()) throw Error(ErrorKind::kInvalidArgument, "weight grid is empty");
  for (const auto& w : grid) {
    if (w.size() != program.num_objectives()) {
      throw Error(ErrorKind::kDimensionMismatch, "weight vector length does not match the number of objectives");
    }
  }

  std::vector<std::optional<ParetoPoint>> slots(grid.size());
  auto solve_point = [&](std::size_t index) {
    const auto& w = grid[index];
    ParetoPoint point{w, run_pipeline(scalarize(program, w), options), {}, 0.0};
    if (point.result.ok()) {
      point.objective_vector = point.result.primal->objective_values;
      point.Z = point.result.primal->Z;
    }
    slots[index] = std::move(point);
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) solve_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) solve_point(i);
      });
    }
  }

  SweepReport report;
  report.points.reserve(grid.size());
  for (auto& slot : slots) report.points.push_back(std::move(*slot));

  std::vector<std::vector<double>> vectors;
  std::vector<std::size_t> owners;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    if (!report.points[i].ok()) continue;
    vectors.push_back(report.points[i].objective_vector);
    owners.push_back(i);
  }
  const auto flags = dominance_filter(vectors);
  report.nondominated.assign(report.points.size(), false);
  for (std::size_t q = 0; q < owners.size(); ++q) report.nondominated[owners[q]] = flags[q];

  report.ideal = ideal_points(program, options);
  return report;
}

}  // namespace mogp
