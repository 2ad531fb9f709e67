#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ontoqubit::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

enum class Format { kJson, kCsv };

struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  std::string relation;  // "<=", ">=" or "=="
  bool pass = false;
};

Check check_at_most(std::string name, double value, double tol);
Check check_at_least(std::string name, double value, double bound);
Check check_equal(std::string name, double value, double expected);

struct Report {
  Json config = Json::object();
  std::vector<Check> checks;
  Json data = Json::object();
  /// Subcommand table for CSV output; the checks table when absent.
  std::optional<std::string> csv;
  double elapsed_ms = 0.0;

  bool pass() const;
};

Json to_json(const Report& r);
std::string checks_csv(const std::vector<Check>& checks);

/// Writes the report to `path`, or to `out` when path is empty or "-".
/// Throws std::runtime_error when the path cannot be written.
void emit_report(const Report& r, Format format, const std::string& path, std::ostream& out);

}  // namespace ontoqubit::cli
