#pragma once

#include <iosfwd>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "thetapolar/config.hpp"
#include "thetapolar/precision.hpp"

namespace thetapolar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

inline constexpr int kDefaultPrecisionDigits = 80;
inline constexpr const char* kPrecisionEnv = "THETA_POLAR_PRECISION_DIGITS";

/// Bad user input; reported on one line with exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Provenance block written into every output.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  int precision_digits = kDefaultPrecisionDigits;
  std::string tool_version;
  std::string timestamp;
};

const char* tool_version();

/// ISO-8601 UTC time: `override_text` when non-empty, else SOURCE_DATE_EPOCH
/// when set, else the current time.
std::string manifest_timestamp(const std::string& override_text);

/// Points from JSON text: {"n": k, "points": [...]} or a bare array of
/// decimal strings. Errors name the offending entry index.
Configuration parse_points_json(const std::string& text, const PrecisionContext& ctx);

/// Runs one command line (args excludes the program name). JSON, CSV or the
/// plain value goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thetapolar::cli
