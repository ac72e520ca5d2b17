#pragma once

// Problem documents (JSON, comments allowed) and report serialization.
//
// Problem document:
//   {
//     "variables":   ["x1", "x2"],
//     "objectives":  [{"sense": "min", "terms": [{"coef": 4, "exps": {"x1": 1}}]}],
//     "constraints": [{"terms": [{"coef": 1, "exps": {"x1": -1, "x2": 2}}], "bound": 6}]
//   }
// Omitted exponents are zero. "constraints" may be empty or absent.

#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mogp/error.hpp"
#include "mogp/model.hpp"
#include "mogp/pareto.hpp"
#include "mogp/scalarize.hpp"
#include "mogp/solver.hpp"

namespace mogp::io {

using nlohmann::json;

namespace detail {

inline std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

[[noreturn]] inline void fail(const std::string& path, const std::string& message,
                              ErrorKind kind = ErrorKind::kParse) {
  throw Error(kind, path + ": " + message);
}

inline void only_keys(const json& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!node.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : node.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) fail(path, "unknown key '" + key + "'");
  }
}

inline double number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

inline Posynomial parse_terms(const json& node, const std::string& path, const VariableSpace& vars) {
  if (!node.is_array() || node.empty()) fail(path, "expected a non-empty array of terms");
  std::vector<Monomial> terms;
  for (std::size_t t = 0; t < node.size(); ++t) {
    const std::string term_path = path + "[" + std::to_string(t) + "]";
    const auto& term = node[t];
    only_keys(term, term_path, {"coef", "exps"});
    if (!term.contains("coef")) fail(term_path, "missing 'coef'");
    const double coef = number(term["coef"], term_path + ".coef");
    if (!(coef > 0.0)) fail(term_path + ".coef", "posynomial coefficient must be positive", ErrorKind::kDomain);
    std::vector<double> exponents(vars.size(), 0.0);
    if (term.contains("exps")) {
      const auto& exps = term["exps"];
      if (!exps.is_object()) fail(term_path + ".exps", "expected an object mapping variable to exponent");
      for (const auto& [name, value] : exps.items()) {
        const auto j = vars.index_of(name);
        if (!j) fail(term_path + ".exps", "unknown variable '" + name + "'");
        exponents[*j] = number(value, term_path + ".exps." + name);
      }
    }
    try {
      terms.emplace_back(coef, std::move(exponents));
    } catch (const Error& e) {
      fail(term_path, e.what(), e.kind());
    }
  }
  return Posynomial(std::move(terms));
}

inline json terms_to_json(const Posynomial& g, const VariableSpace& vars) {
  json terms = json::array();
  for (const auto& term : g.terms()) {
    json exps = json::object();
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (term.exponent(j) != 0.0) exps[vars.name(j)] = term.exponent(j);
    }
    terms.push_back({{"coef", term.coefficient()}, {"exps", exps}});
  }
  return terms;
}

}  // namespace detail

/// Parses a problem document. Term and objective order follow the document.
inline RawProblem parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, "syntax error at " + detail::location(text, e.byte == 0 ? 0 : e.byte - 1) +
                                       ": " + e.what());
  }
  detail::only_keys(doc, "document", {"variables", "objectives", "constraints"});
  if (!doc.contains("variables")) detail::fail("document", "missing 'variables'");
  if (!doc.contains("objectives")) detail::fail("document", "missing 'objectives'");

  const auto& names_node = doc["variables"];
  if (!names_node.is_array()) detail::fail("variables", "expected an array of names");
  std::vector<std::string> names;
  for (std::size_t j = 0; j < names_node.size(); ++j) {
    if (!names_node[j].is_string()) detail::fail("variables[" + std::to_string(j) + "]", "expected a string");
    names.push_back(names_node[j].get<std::string>());
  }
  VariableSpace vars;
  try {
    vars = VariableSpace(std::move(names));
  } catch (const Error& e) {
    detail::fail("variables", e.what());
  }

  const auto& objectives_node = doc["objectives"];
  if (!objectives_node.is_array() || objectives_node.empty()) {
    detail::fail("objectives", "expected a non-empty array");
  }
  std::vector<RawObjective> objectives;
  for (std::size_t k = 0; k < objectives_node.size(); ++k) {
    const std::string path = "objectives[" + std::to_string(k) + "]";
    const auto& node = objectives_node[k];
    detail::only_keys(node, path, {"sense", "terms"});
    Sense sense = Sense::kMinimize;
    if (node.contains("sense")) {
      const auto& s = node["sense"];
      if (s == "min") {
        sense = Sense::kMinimize;
      } else if (s == "max") {
        sense = Sense::kMaximize;
      } else {
        detail::fail(path + ".sense", "expected \"min\" or \"max\"");
      }
    }
    if (!node.contains("terms")) detail::fail(path, "missing 'terms'");
    objectives.push_back({detail::parse_terms(node["terms"], path + ".terms", vars), sense});
  }

  std::vector<RawConstraint> constraints;
  if (doc.contains("constraints")) {
    const auto& constraints_node = doc["constraints"];
    if (!constraints_node.is_array()) detail::fail("constraints", "expected an array");
    for (std::size_t i = 0; i < constraints_node.size(); ++i) {
      const std::string path = "constraints[" + std::to_string(i) + "]";
      const auto& node = constraints_node[i];
      detail::only_keys(node, path, {"terms", "bound"});
      if (!node.contains("terms")) detail::fail(path, "missing 'terms'");
      double bound = 1.0;
      if (node.contains("bound")) {
        bound = detail::number(node["bound"], path + ".bound");
        if (!(bound > 0.0)) detail::fail(path + ".bound", "bound must be positive", ErrorKind::kDomain);
      }
      constraints.push_back({detail::parse_terms(node["terms"], path + ".terms", vars), bound});
    }
  }
  return {vars, std::move(objectives), std::move(constraints)};
}

inline std::string serialize_problem(const RawProblem& problem) {
  json doc;
  doc["variables"] = problem.variables.names();
  doc["objectives"] = json::array();
  for (const auto& objective : problem.objectives) {
    doc["objectives"].push_back({{"sense", objective.sense == Sense::kMinimize ? "min" : "max"},
                                 {"terms", detail::terms_to_json(objective.posynomial, problem.variables)}});
  }
  doc["constraints"] = json::array();
  for (const auto& constraint : problem.constraints) {
    doc["constraints"].push_back({{"terms", detail::terms_to_json(constraint.posynomial, problem.variables)},
                                  {"bound", constraint.bound}});
  }
  return doc.dump(2) + "\n";
}

/// Seven significant digits, the precision of the reference tables.
inline std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.7g", value);
  return buffer;
}

/// Dual-variable column labels: w01..w0T for the scalarized objective terms,
/// then wi1..wiTi for constraint i.
inline std::vector<std::string> dual_labels(const MultiObjectiveProgram& program) {
  auto label = [](std::size_t group, std::size_t index) {
    if (group < 10 && index < 10) return "w" + std::to_string(group) + std::to_string(index);
    return "w" + std::to_string(group) + "_" + std::to_string(index);
  };
  std::vector<std::string> labels;
  std::size_t objective_terms = 0;
  for (const auto& g : program.objectives()) objective_terms += g.size();
  for (std::size_t t = 1; t <= objective_terms; ++t) labels.push_back(label(0, t));
  for (std::size_t i = 0; i < program.num_constraints(); ++i) {
    for (std::size_t t = 1; t <= program.constraints()[i].size(); ++t) labels.push_back(label(i + 1, t));
  }
  return labels;
}

inline std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + "\n";
}

/// Columns: w1..wp, dual variables, V. Failed points keep their weights and
/// leave the remaining cells empty.
inline std::string dual_table_csv(const MultiObjectiveProgram& program, const std::vector<ParetoPoint>& points) {
  std::vector<std::string> header;
  for (std::size_t k = 1; k <= program.num_objectives(); ++k) header.push_back("w" + std::to_string(k));
  const auto labels = dual_labels(program);
  header.insert(header.end(), labels.begin(), labels.end());
  header.push_back("V");
  std::string out = join(header);
  for (const auto& point : points) {
    std::vector<std::string> row;
    for (double w : point.weights.values()) row.push_back(format_number(w));
    if (point.ok()) {
      const auto& delta = point.result.dual->point.delta;
      for (Eigen::Index t = 0; t < delta.size(); ++t) row.push_back(format_number(delta(t)));
      row.push_back(format_number(point.result.dual->value));
    } else {
      row.resize(header.size());
    }
    out += join(row);
  }
  return out;
}

/// Columns: w1..wp, x1..xn, Z.
inline std::string primal_table_csv(const MultiObjectiveProgram& program, const std::vector<ParetoPoint>& points) {
  std::vector<std::string> header;
  for (std::size_t k = 1; k <= program.num_objectives(); ++k) header.push_back("w" + std::to_string(k));
  for (std::size_t j = 1; j <= program.num_variables(); ++j) header.push_back("x" + std::to_string(j));
  header.push_back("Z");
  std::string out = join(header);
  for (const auto& point : points) {
    std::vector<std::string> row;
    for (double w : point.weights.values()) row.push_back(format_number(w));
    if (point.ok()) {
      for (double xj : point.result.primal->x) row.push_back(format_number(xj));
      row.push_back(format_number(point.Z));
    } else {
      row.resize(header.size());
    }
    out += join(row);
  }
  return out;
}

inline json to_json(const SolverOptions& options) {
  return {{"max_iterations", options.max_iterations},
          {"gradient_tolerance", options.gradient_tolerance},
          {"equality_tolerance", options.equality_tolerance},
          {"active_threshold", options.active_threshold}};
}

inline json to_json(const PipelineResult& result, const std::vector<std::string>& labels) {
  json out;
  if (result.dual) {
    const auto& dual = *result.dual;
    json delta = json::object();
    for (Eigen::Index t = 0; t < dual.point.delta.size(); ++t) {
      const auto key = static_cast<std::size_t>(t) < labels.size() ? labels[static_cast<std::size_t>(t)]
                                                                   : "d" + std::to_string(t + 1);
      delta[key] = dual.point.delta(t);
    }
    out["dual"] = {{"delta", delta},
                   {"lambda", std::vector<double>(dual.lambda.data(), dual.lambda.data() + dual.lambda.size())},
                   {"V", dual.value},
                   {"log_V", dual.log_value},
                   {"status", std::string(to_string(dual.status))},
                   {"iterations", dual.iterations},
                   {"reduced_gradient_norm", dual.reduced_gradient_norm},
                   {"equality_residual", dual.equality_residual}};
  }
  if (result.primal) {
    const auto& primal = *result.primal;
    out["primal"] = {{"x", primal.x},
                     {"objective_values", primal.objective_values},
                     {"Z", primal.Z},
                     {"unique", primal.unique},
                     {"recovery_residual", primal.recovery_residual}};
  }
  if (result.report) {
    const auto& report = *result.report;
    out["verification"] = {{"max_constraint_violation", report.max_constraint_violation},
                           {"duality_gap", report.duality_gap},
                           {"recovery_residual", report.recovery_residual},
                           {"active_constraints", report.active_constraints},
                           {"constraint_values", report.constraint_values}};
  }
  if (result.failure) {
    out["error"] = {{"kind", std::string(to_string(result.failure->kind))}, {"message", result.failure->message}};
  }
  out["status"] = result.ok() ? "ok" : "failed";
  return out;
}

inline json to_json(const IdealPoint& ideal) {
  json out = {{"objective", ideal.objective + 1}};
  if (ideal.ok()) {
    out["value"] = ideal.value;
    out["witness"] = ideal.witness;
    out["unique"] = ideal.unique;
  } else {
    out["error"] = {{"kind", std::string(to_string(ideal.result.failure->kind))},
                    {"message", ideal.result.failure->message}};
  }
  return out;
}

inline json problem_summary(const MultiObjectiveProgram& program) {
  return {{"variables", program.variables().names()},
          {"p", program.num_objectives()},
          {"m", program.num_constraints()},
          {"n", program.num_variables()},
          {"degree_of_difficulty", degree_of_difficulty(program)}};
}

inline json point_json(const ParetoPoint& point, const std::vector<std::string>& labels) {
  json out = to_json(point.result, labels);
  out["weights"] = point.weights.values();
  if (point.ok()) {
    out["objective_vector"] = point.objective_vector;
    out["Z"] = point.Z;
  }
  return out;
}

inline json sweep_report_json(const MultiObjectiveProgram& program, const SweepReport& report,
                              const SolverOptions& options) {
  const auto labels = dual_labels(program);
  json points = json::array();
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    json point = point_json(report.points[i], labels);
    point["nondominated"] = static_cast<bool>(report.nondominated[i]);
    points.push_back(std::move(point));
  }
  json ideal = json::array();
  for (const auto& point : report.ideal) ideal.push_back(to_json(point));
  return {{"problem", problem_summary(program)},
          {"solver", to_json(options)},
          {"points", points},
          {"ideal", ideal},
          {"tables",
           {{"dual", dual_table_csv(program, report.points)}, {"primal", primal_table_csv(program, report.points)}}}};
}

}  // namespace mogp::io
