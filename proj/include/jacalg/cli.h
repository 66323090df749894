#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jacalg/cochain.h"

/// Command-line front end. Exit codes: 0 holds/accepted, 1 counterexample or
/// rejection, 2 usage or resource error.
namespace jacalg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitError = 2;

struct RunConfig {
  std::string command;  // "verify identity", "check derivation", ...
  std::string bracket = "jacS";
  std::size_t n = 3;
  std::string identity;
  std::string spec;  // derivation
  std::string mode = "both";
  std::optional<std::pair<std::int64_t, std::int64_t>> grid;
  std::optional<std::int64_t> degree_cap;
  std::optional<std::size_t> tuples;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::size_t jobs = 1;
  /// Term budget for symbolic work; tuple budget for grid sweeps.
  std::optional<std::size_t> budget;
  bool timing = false;
  std::string alphabet;
  std::string word;
  std::vector<std::string> args;

  nlohmann::json to_json() const;
};

struct Outcome {
  int exit_code = kExitOk;
  std::string output;
};

/// "lo..hi", either bound may be negative.
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text);

Outcome cmd_verify_identity(const RunConfig& cfg);
Outcome cmd_check_derivation(const RunConfig& cfg);
Outcome cmd_minident(const RunConfig& cfg);
Outcome cmd_omega(const RunConfig& cfg);  // command "omega check" or "omega parse"
Outcome cmd_eval(const RunConfig& cfg);

/// Parses argv, dispatches, writes the report to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jacalg::cli
