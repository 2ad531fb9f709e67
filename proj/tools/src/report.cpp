#include "ontoqubit_cli/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ontoqubit::cli {

namespace {

// JSON has no infinities; they are reported as the largest finite double.
double finite(double v) {
  if (std::isnan(v)) return v;
  if (std::isinf(v)) return std::copysign(std::numeric_limits<double>::max(), v);
  return v;
}

}  // namespace

Check check_at_most(std::string name, double value, double tol) {
  return {std::move(name), value, tol, "<=", value <= tol};
}

Check check_at_least(std::string name, double value, double bound) {
  return {std::move(name), value, bound, ">=", value >= bound};
}

Check check_equal(std::string name, double value, double expected) {
  return {std::move(name), value, expected, "==", value == expected};
}

bool Report::pass() const {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Json to_json(const Report& r) {
  Json j;
  j["version"] = kReportVersion;
  j["config"] = r.config;
  j["checks"] = Json::array();
  for (const Check& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"value", finite(c.value)},
                           {"tol", finite(c.tol)},
                           {"relation", c.relation},
                           {"pass", c.pass}});
  }
  j["pass"] = r.pass();
  j["data"] = r.data;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

std::string checks_csv(const std::vector<Check>& checks) {
  std::ostringstream out;
  out << "name,value,tol,pass\n" << std::setprecision(17);
  for (const Check& c : checks) {
    out << '"' << c.name << "\"," << c.value << ',' << c.tol << ',' << (c.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

void emit_report(const Report& r, Format format, const std::string& path, std::ostream& out) {
  std::string body;
  if (format == Format::kJson) {
    body = to_json(r).dump(2) + "\n";
  } else {
    body = r.csv ? *r.csv : checks_csv(r.checks);
  }
  if (path.empty() || path == "-") {
    out << body;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  file << body;
  if (!file) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace ontoqubit::cli
