#pragma once

// Command-line driver. Exit codes:
//   0 success, 1 parse/usage error, 2 solver error (solve),
//   3 some sweep point failed, 4 supplied point infeasible (check).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mogp/error.hpp"
#include "mogp/fixtures.hpp"
#include "mogp/io.hpp"
#include "mogp/model.hpp"
#include "mogp/pareto.hpp"
#include "mogp/scalarize.hpp"
#include "mogp/solver.hpp"

namespace mogp::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSolverError = 2,
  kSweepFailures = 3,
  kInfeasible = 4,
};

/// A path to a problem document, or one of the built-in names
/// example1, example2, example2-verbatim.
inline RawProblem load_problem(const std::string& source) {
  if (std::filesystem::is_regular_file(source)) {
    std::ifstream in(source);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return io::parse_problem(buffer.str());
  }
  if (auto builtin = fixtures::builtin(source)) return *builtin;
  throw Error(ErrorKind::kInvalidArgument, "no such problem file or built-in problem: " + source);
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path);
  out << content;
}

inline std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += io::format_number(values[i]);
  }
  return out;
}

// out.csv -> out_dual.csv, out_primal.csv
inline std::pair<std::string, std::string> table_paths(const std::string& path) {
  std::string base = path;
  if (base.size() >= 4 && base.compare(base.size() - 4, 4, ".csv") == 0) base.resize(base.size() - 4);
  return {base + "_dual.csv", base + "_primal.csv"};
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-objective posynomial geometric programming via weighted sums and the dual"};
  app.require_subcommand(1);
  SolverOptions options;
  app.add_option("--max-iterations", options.max_iterations, "dual ascent iteration limit")
      ->capture_default_str();

  std::string problem_source;
  std::vector<double> weights;
  std::vector<double> point;
  double step = 0.1;
  double max_weight = 1.0;
  std::string csv_path;
  std::string json_path;
  unsigned parallel = 1;

  auto* analyze = app.add_subcommand("analyze", "print problem dimensions and degree of difficulty");
  analyze->add_option("problem", problem_source, "problem file or built-in name")->required();

  auto* solve = app.add_subcommand("solve", "solve one weighted-sum problem and print a JSON report");
  solve->add_option("problem", problem_source, "problem file or built-in name")->required();
  solve->add_option("--weights", weights, "comma-separated preference weights")->delimiter(',')->required();
  solve->add_option("--json", json_path, "also write the report to this file");

  auto* sweep_cmd = app.add_subcommand("sweep", "solve over a weight grid and emit dual/primal tables");
  sweep_cmd->add_option("problem", problem_source, "problem file or built-in name")->required();
  sweep_cmd->add_option("--step", step, "grid spacing (1/step must be an integer)")->required();
  sweep_cmd->add_option("--max-weight", max_weight, "keep only grid points with w1 <= this value");
  sweep_cmd->add_option("--csv", csv_path, "write <base>_dual.csv and <base>_primal.csv");
  sweep_cmd->add_option("--json", json_path, "write the JSON report to this file ('-' for stdout only)");
  sweep_cmd->add_option("--parallel", parallel, "number of worker threads")->check(CLI::PositiveNumber);

  auto* ideal = app.add_subcommand("ideal", "minimize each objective alone");
  ideal->add_option("problem", problem_source, "problem file or built-in name")->required();
  ideal->add_option("--json", json_path, "write a JSON report to this file ('-' for stdout)");

  auto* check = app.add_subcommand("check", "evaluate feasibility and Z at a given point");
  check->add_option("problem", problem_source, "problem file or built-in name")->required();
  check->add_option("--weights", weights, "comma-separated preference weights")->delimiter(',')->required();
  check->add_option("--x", point, "comma-separated variable values")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  std::optional<MultiObjectiveProgram> loaded;
  try {
    loaded.emplace(to_standard_form(load_problem(problem_source)));
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kUsage;
  }
  const MultiObjectiveProgram& program = *loaded;

  try {
    if (analyze->parsed()) {
      out << "objectives (p): " << program.num_objectives() << "\n";
      out << "constraints (m): " << program.num_constraints() << "\n";
      out << "variables (n): " << program.num_variables() << "\n";
      out << "objective terms:";
      for (const auto& g : program.objectives()) out << ' ' << g.size();
      out << "\nconstraint terms:";
      for (const auto& g : program.constraints()) out << ' ' << g.size();
      const std::vector<double> uniform(program.num_objectives(), 1.0 / static_cast<double>(program.num_objectives()));
      out << "\ndegree of difficulty (uniform weights): "
          << degree_of_difficulty(scalarize_with(program, uniform).program) << "\n";
      return kOk;
    }

    if (solve->parsed()) {
      const PreferenceWeights w(weights);
      ParetoPoint reported{w, run_pipeline(scalarize(program, w), options), {}, 0.0};
      if (reported.ok()) {
        reported.objective_vector = reported.result.primal->objective_values;
        reported.Z = reported.result.primal->Z;
      }
      io::json doc = {{"problem", io::problem_summary(program)},
                      {"solver", io::to_json(options)},
                      {"point", io::point_json(reported, io::dual_labels(program))}};
      const std::string text = doc.dump(2) + "\n";
      out << text;
      if (!json_path.empty() && json_path != "-") detail::write_file(json_path, text);
      if (!reported.ok()) {
        err << "error: " << to_string(reported.result.failure->kind) << ": " << reported.result.failure->message
            << "\n";
        return kSolverError;
      }
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      std::vector<PreferenceWeights> grid;
      for (auto& w : weight_grid(program.num_objectives(), step)) {
        if (w[0] <= max_weight + 1e-12) grid.push_back(std::move(w));
      }
      if (grid.empty()) {
        err << "error: the weight grid is empty\n";
        return kUsage;
      }
      const SweepReport report = mogp::sweep(program, grid, options, parallel);
      const std::string dual_csv = io::dual_table_csv(program, report.points);
      const std::string primal_csv = io::primal_table_csv(program, report.points);
      if (!csv_path.empty()) {
        const auto [dual_path, primal_path] = detail::table_paths(csv_path);
        detail::write_file(dual_path, dual_csv);
        detail::write_file(primal_path, primal_csv);
      }
      if (!json_path.empty()) {
        const std::string text = io::sweep_report_json(program, report, options).dump(2) + "\n";
        if (json_path != "-") detail::write_file(json_path, text);
        out << text;
      } else {
        out << dual_csv << "\n" << primal_csv;
      }
      for (std::size_t i = 0; i < report.points.size(); ++i) {
        const auto& p = report.points[i];
        if (!p.ok()) {
          err << "point " << i + 1 << " (w = " << detail::join_numbers(p.weights.values())
              << ") failed: " << to_string(p.result.failure->kind) << ": " << p.result.failure->message << "\n";
        }
      }
      return report.failures() == 0 ? kOk : kSweepFailures;
    }

    if (ideal->parsed()) {
      const auto points = ideal_points(program, options);
      bool all_ok = true;
      if (!json_path.empty()) {
        io::json doc = io::json::array();
        for (const auto& p : points) doc.push_back(io::to_json(p));
        const std::string text = doc.dump(2) + "\n";
        if (json_path != "-") detail::write_file(json_path, text);
        out << text;
      }
      for (const auto& p : points) {
        if (!p.ok()) {
          all_ok = false;
          err << "objective " << p.objective + 1 << ": " << to_string(p.result.failure->kind) << ": "
              << p.result.failure->message << "\n";
          continue;
        }
        if (json_path.empty()) {
          out << "f" << p.objective + 1 << " = " << io::format_number(p.value) << "  x = ("
              << detail::join_numbers(p.witness) << ")" << (p.unique ? "" : "  [non-unique minimizer]") << "\n";
        }
      }
      return all_ok ? kOk : kSolverError;
    }

    if (check->parsed()) {
      const PreferenceWeights w(weights);
      if (point.size() != program.num_variables()) {
        throw Error(ErrorKind::kDimensionMismatch, "expected " + std::to_string(program.num_variables()) +
                                                       " values for --x, got " + std::to_string(point.size()));
      }
      bool feasible = true;
      for (std::size_t i = 0; i < program.num_constraints(); ++i) {
        const double gi = evaluate_posynomial(program.constraints()[i], point);
        const bool ok = gi <= 1.0 + 1e-9;
        feasible = feasible && ok;
        out << "g" << i + 1 << "(x) = " << io::format_number(gi) << (ok ? "  <= 1" : "  > 1  VIOLATED") << "\n";
      }
      for (std::size_t k = 0; k < program.num_objectives(); ++k) {
        out << "f" << k + 1 << "(x) = " << io::format_number(evaluate_posynomial(program.objectives()[k], point))
            << "\n";
      }
      out << "Z = " << io::format_number(weighted_objective(program, w.values(), point)) << "\n";
      out << (feasible ? "feasible" : "infeasible") << "\n";
      return feasible ? kOk : kInfeasible;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace mogp::cli
