#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ontoqubit/geometry.hpp"
#include "ontoqubit_cli/report.hpp"
#include "ontoqubit_cli/run.hpp"

namespace ontoqubit::cli {
namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

nlohmann::json without_timing(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  j.erase("elapsed_ms");
  return j;
}

TEST(ParseTest, Angles) {
  EXPECT_DOUBLE_EQ(parse_angle("0.5"), 0.5);
  EXPECT_NEAR(parse_angle("90deg"), kPi / 2.0, 1e-15);
  EXPECT_NEAR(parse_angle("53.13deg"), 53.13 * kPi / 180.0, 1e-15);
  EXPECT_THROW(parse_angle("deg"), UsageError);
  EXPECT_THROW(parse_angle("1.0rad"), UsageError);
}

TEST(ParseTest, Information) {
  EXPECT_NEAR(parse_information("ln100"), std::log(100.0), 1e-15);
  EXPECT_DOUBLE_EQ(parse_information("4.5"), 4.5);
  EXPECT_THROW(parse_information("ln0"), UsageError);
  EXPECT_THROW(parse_information("lnx"), UsageError);
}

TEST(ExitCodeTest, PassingRun) {
  const Outcome o = invoke({"resource", "--g", "1,4", "--info", "ln100", "--ns", ""});
  EXPECT_EQ(o.code, kExitPass) << o.err;
  const nlohmann::json j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["version"], kReportVersion);
  EXPECT_TRUE(j["pass"].get<bool>());
  const auto n = j["data"]["plan"]["n"];
  ASSERT_EQ(n.size(), 2u);
  EXPECT_NEAR(n[0].get<double>(), 5.0, 1e-12);
  EXPECT_NEAR(n[1].get<double>(), 20.0, 1e-12);
  EXPECT_EQ(j["data"]["integer_search"]["n"], (std::vector<int>{5, 20}));
}

TEST(ExitCodeTest, FailedCheck) {
  const Outcome o = invoke({"sample", "--seed", "3", "--pairs", "5", "--samples", "200", "--sigma", "1e-9"});
  EXPECT_EQ(o.code, kExitCheckFailure) << o.err;
  EXPECT_FALSE(nlohmann::json::parse(o.out)["pass"].get<bool>());
}

TEST(ExitCodeTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"resource", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"no-such-command"}).code, kExitUsage);
  EXPECT_EQ(invoke({"sample"}).code, kExitUsage);  // --seed is required
  EXPECT_EQ(invoke({"resource", "--g", "1,-4"}).code, kExitUsage);
  EXPECT_EQ(invoke({"region", "--theta0", "0.3", "--s", "0.5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"resource", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(invoke({"family-check", "--theta0", "1.0"}).code, kExitUsage);
}

TEST(ExitCodeTest, HelpIsNotAnError) {
  const Outcome o = invoke({"--help"});
  EXPECT_EQ(o.code, kExitPass);
  EXPECT_NE(o.out.find("verify-born"), std::string::npos);
}

TEST(OutputTest, JsonShape) {
  const Outcome o = invoke({"verify-born", "--grid", "8"});
  ASSERT_EQ(o.code, kExitPass) << o.err;
  const nlohmann::json j = nlohmann::json::parse(o.out);
  for (const char* key : {"version", "config", "checks", "pass", "data", "elapsed_ms"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  ASSERT_FALSE(j["checks"].empty());
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c.contains("name"));
    EXPECT_TRUE(c.contains("value"));
    EXPECT_TRUE(c.contains("tol"));
    EXPECT_TRUE(c.contains("pass"));
  }
}

TEST(OutputTest, CsvHasConstantColumnCount) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"verify-born", "--grid", "8", "--format", "csv"},
        std::vector<std::string>{"resource", "--format", "csv"},
        std::vector<std::string>{"group", "--seed", "1", "--states", "3", "--format", "csv"}}) {
    const Outcome o = invoke(args);
    ASSERT_EQ(o.code, kExitPass) << args[0] << o.err;
    std::istringstream in(o.out);
    std::string line;
    long columns = -1;
    int lines = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      // Quoted fields carry no embedded commas in these tables.
      const long c = std::count(line.begin(), line.end(), ',');
      if (columns < 0) columns = c;
      EXPECT_EQ(c, columns) << args[0] << ": " << line;
      ++lines;
    }
    EXPECT_GE(lines, 2) << args[0];
  }
}

TEST(OutputTest, DeterministicApartFromTiming) {
  const std::vector<std::vector<std::string>> runs{
      {"sample", "--seed", "11", "--pairs", "3", "--samples", "1000"},
      {"patches", "--seed", "11", "--pairs", "50", "--orthogonal", "10"},
      {"group", "--seed", "11", "--states", "4"},
      {"family-check", "--grid", "8"}};
  for (const auto& args : runs) {
    const Outcome a = invoke(args);
    const Outcome b = invoke(args);
    ASSERT_EQ(a.code, kExitPass) << args[0] << a.err;
    EXPECT_EQ(without_timing(a.out), without_timing(b.out)) << args[0];
  }
}

TEST(OutputTest, SeedChangesSampling) {
  const Outcome a = invoke({"sample", "--seed", "1", "--pairs", "2", "--samples", "1000"});
  const Outcome b = invoke({"sample", "--seed", "2", "--pairs", "2", "--samples", "1000"});
  EXPECT_NE(without_timing(a.out), without_timing(b.out));
}

TEST(ReportTest, ChecksAndCsv) {
  EXPECT_TRUE(check_at_most("a", 1.0, 1.0).pass);
  EXPECT_FALSE(check_at_most("a", 1.5, 1.0).pass);
  EXPECT_FALSE(check_at_most("a", std::nan(""), 1.0).pass);
  EXPECT_TRUE(check_at_least("b", 2.0, 1.0).pass);
  EXPECT_TRUE(check_equal("c", 10.0, 10.0).pass);
  EXPECT_FALSE(check_equal("c", 9.0, 10.0).pass);
  const std::string csv = checks_csv({check_at_most("a", 1.0, 2.0)});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "name,value,tol,pass");
  Report r;
  EXPECT_TRUE(r.pass());
  r.checks.push_back(check_at_most("x", 3.0, 1.0));
  EXPECT_FALSE(r.pass());
}

TEST(ReportTest, UnwritablePathIsAnError) {
  std::ostringstream out;
  EXPECT_THROW(emit_report(Report{}, Format::kJson, "/nonexistent-dir/x.json", out), std::runtime_error);
}

}  // namespace
}  // namespace ontoqubit::cli
