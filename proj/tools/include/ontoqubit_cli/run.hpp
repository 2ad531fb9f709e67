#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ontoqubit::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Radians, or degrees with a "deg" suffix ("53.13deg").
double parse_angle(const std::string& text);
/// Nats: a plain number or "lnX" for log(X).
double parse_information(const std::string& text);

/// Parses and executes one subcommand; args exclude the program name.
/// Returns 0 when every check passes, 1 on a failed check, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ontoqubit::cli
