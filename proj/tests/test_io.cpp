#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mogp/fixtures.hpp"
#include "mogp/io.hpp"
#include "mogp/pareto.hpp"

namespace mogp {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string data_file(const std::string& name) { return read_file(std::string(MOGP_DATA_DIR) + "/" + name); }

Error parse_error(const std::string& text) {
  try {
    io::parse_problem(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "document accepted: " << text;
  return Error(ErrorKind::kInvalidArgument, "");
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(ParseProblem, Example1Document) {
  const auto raw = io::parse_problem(data_file("example1.json"));
  const auto program = to_standard_form(raw);
  EXPECT_EQ(program.num_objectives(), 2u);
  EXPECT_EQ(program.num_constraints(), 2u);
  EXPECT_EQ(program.num_variables(), 4u);
  EXPECT_EQ(raw.objectives[1].sense, Sense::kMaximize);
}

TEST(ParseProblem, DataFilesMatchBuiltins) {
  EXPECT_EQ(io::parse_problem(data_file("example1.json")), fixtures::example1());
  EXPECT_EQ(io::parse_problem(data_file("example2.json")), fixtures::example2());
  EXPECT_EQ(io::parse_problem(data_file("example2_verbatim.json")), fixtures::example2_verbatim());
}

TEST(ParseProblem, ConstraintsMayBeEmptyOrAbsent) {
  const std::string body = R"("variables": ["x"], "objectives": [{"terms": [{"coef": 1, "exps": {"x": 1}},
                                                                 {"coef": 1, "exps": {"x": -1}}]}])";
  EXPECT_TRUE(io::parse_problem("{" + body + ", \"constraints\": []}").constraints.empty());
  EXPECT_TRUE(io::parse_problem("{" + body + "}").constraints.empty());
}

TEST(ParseProblem, OmittedExponentsAreZero) {
  const auto raw = io::parse_problem(R"({"variables": ["a", "b"], "objectives": [{"terms": [{"coef": 3}]}]})");
  EXPECT_EQ(raw.objectives[0].posynomial.term(0).exponents(), (std::vector<double>{0.0, 0.0}));
}

TEST(ParseProblem, NegativeCoefficientNamesTheElement) {
  const auto e = parse_error(
      R"({"variables": ["x"], "objectives": [{"terms": [{"coef": 1}, {"coef": -3, "exps": {"x": 1}}]}]})");
  EXPECT_EQ(e.kind(), ErrorKind::kDomain);
  EXPECT_NE(std::string(e.what()).find("objectives[0].terms[1].coef"), std::string::npos) << e.what();
  EXPECT_NE(std::string(e.what()).find("posynomial coefficient must be positive"), std::string::npos);
}

TEST(ParseProblem, NonPositiveBound) {
  const auto e = parse_error(
      R"({"variables": ["x"], "objectives": [{"terms": [{"coef": 1}]}],
          "constraints": [{"terms": [{"coef": 1, "exps": {"x": 1}}], "bound": 0}]})");
  EXPECT_EQ(e.kind(), ErrorKind::kDomain);
  EXPECT_NE(std::string(e.what()).find("constraints[0].bound"), std::string::npos);
}

TEST(ParseProblem, UnknownKeysAndVariables) {
  auto e = parse_error(R"({"variables": ["x"], "objectives": [{"terms": [{"coef": 1}]}], "extra": 1})");
  EXPECT_EQ(e.kind(), ErrorKind::kParse);
  EXPECT_NE(std::string(e.what()).find("unknown key 'extra'"), std::string::npos);
  e = parse_error(R"({"variables": ["x"], "objectives": [{"terms": [{"coef": 1, "exps": {"y": 2}}]}]})");
  EXPECT_NE(std::string(e.what()).find("unknown variable 'y'"), std::string::npos);
  e = parse_error(R"({"variables": ["x"], "objectives": [{"sense": "up", "terms": [{"coef": 1}]}]})");
  EXPECT_NE(std::string(e.what()).find("objectives[0].sense"), std::string::npos);
  e = parse_error(R"({"variables": ["x", "x"], "objectives": [{"terms": [{"coef": 1}]}]})");
  EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  e = parse_error(R"({"variables": ["x"], "objectives": []})");
  EXPECT_EQ(e.kind(), ErrorKind::kParse);
}

TEST(ParseProblem, SyntaxErrorReportsLocation) {
  const auto e = parse_error("{\n  \"variables\": [\"x\"],\n  \"objectives\": [}\n}");
  EXPECT_EQ(e.kind(), ErrorKind::kParse);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
}

TEST(ParseProblem, CommentsAreAllowed) {
  EXPECT_NO_THROW(io::parse_problem("// header\n{\"variables\": [\"x\"], /* inline */ \"objectives\": "
                                    "[{\"terms\": [{\"coef\": 1}]}]}"));
}

TEST(SerializeProblem, RoundTrips) {
  for (const auto& raw : {fixtures::example1(), fixtures::example2(), fixtures::example2_verbatim()}) {
    const std::string text = io::serialize_problem(raw);
    EXPECT_EQ(io::parse_problem(text), raw);
    EXPECT_EQ(io::serialize_problem(io::parse_problem(text)), text);
  }
}

TEST(SerializeProblem, OmitsZeroExponents) {
  const std::string text = io::serialize_problem(fixtures::example1());
  const auto doc = io::json::parse(text);
  EXPECT_EQ(doc["objectives"][0]["terms"][0]["exps"].size(), 1u);
  EXPECT_EQ(doc["constraints"][1]["terms"][0]["exps"].size(), 3u);
}

TEST(FormatNumber, SevenSignificantDigits) {
  EXPECT_EQ(io::format_number(8.807776123), "8.807776");
  EXPECT_EQ(io::format_number(0.0), "0");
  EXPECT_EQ(io::format_number(1.0), "1");
  EXPECT_EQ(io::format_number(0.000113614), "0.000113614");
}

TEST(DualLabels, FollowTermLayout) {
  EXPECT_EQ(io::dual_labels(to_standard_form(fixtures::example1())),
            (std::vector<std::string>{"w01", "w02", "w03", "w04", "w05", "w11", "w12", "w21"}));
  EXPECT_EQ(io::dual_labels(to_standard_form(fixtures::example2())),
            (std::vector<std::string>{"w01", "w02", "w03", "w11", "w12", "w21"}));
}

TEST(Tables, HeadersAndShape) {
  const auto program = to_standard_form(fixtures::example1());
  const auto report = sweep(program, weight_grid(2, 0.25));
  const auto dual = lines(io::dual_table_csv(program, report.points));
  const auto primal = lines(io::primal_table_csv(program, report.points));
  ASSERT_EQ(dual.size(), 4u);
  ASSERT_EQ(primal.size(), 4u);
  EXPECT_EQ(dual[0], "w1,w2,w01,w02,w03,w04,w05,w11,w12,w21,V");
  EXPECT_EQ(primal[0], "w1,w2,x1,x2,x3,x4,Z");
  EXPECT_EQ(dual[1].rfind("0.25,0.75,", 0), 0u);
  for (const auto& line : dual) EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  for (const auto& line : primal) EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
}

TEST(Tables, ByteStable) {
  const auto program = to_standard_form(fixtures::example2());
  const auto grid = weight_grid(2, 0.1);
  const auto a = sweep(program, grid, {}, 1);
  const auto b = sweep(program, grid, {}, 3);
  EXPECT_EQ(io::dual_table_csv(program, a.points), io::dual_table_csv(program, b.points));
  EXPECT_EQ(io::primal_table_csv(program, a.points), io::primal_table_csv(program, b.points));
}

TEST(Tables, FailedRowsKeepWeights) {
  const auto program = to_standard_form(fixtures::example1());
  SolverOptions options;
  options.max_iterations = 1;
  const auto report = sweep(program, {PreferenceWeights({0.5, 0.5})}, options);
  EXPECT_EQ(lines(io::dual_table_csv(program, report.points))[1], "0.5,0.5,,,,,,,,,");
  EXPECT_EQ(lines(io::primal_table_csv(program, report.points))[1], "0.5,0.5,,,,,");
}

TEST(ReportJson, SweepReportIsWellFormed) {
  const auto program = to_standard_form(fixtures::example2());
  const auto report = sweep(program, weight_grid(2, 0.5));
  const auto doc = io::json::parse(io::sweep_report_json(program, report, {}).dump());
  EXPECT_EQ(doc["problem"]["degree_of_difficulty"], 2);
  ASSERT_EQ(doc["points"].size(), 1u);
  const auto& point = doc["points"][0];
  EXPECT_EQ(point["status"], "ok");
  EXPECT_TRUE(point["nondominated"].get<bool>());
  EXPECT_NEAR(point["Z"].get<double>(), report.points[0].Z, 1e-15);
  EXPECT_TRUE(point["dual"]["delta"].contains("w21"));
  EXPECT_EQ(doc["ideal"].size(), 2u);
  EXPECT_FALSE(doc["ideal"][0]["unique"].get<bool>());
  EXPECT_EQ(doc["tables"]["dual"].get<std::string>(), io::dual_table_csv(program, report.points));
}

}  // namespace
}  // namespace mogp
