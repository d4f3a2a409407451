#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "permmoments/csv.hpp"

namespace pm::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInvalidInput = 2,
  kExitZeroVariance = 3,
};

/// Highest order accepted without --allow-high-order; the closed forms
/// cross-check every order up to here.
inline constexpr int kVerifiedOrderLimit = 5;

struct RunConfig {
  std::string input = "-";
  int k_max = 5;
  /// auto | induction | closed-form | brute-force | monte-carlo
  std::string method = "auto";
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  bool exact = false;
  /// json | csv
  std::string format = "json";
  CsvOptions csv;
  std::optional<double> tolerance;
  bool allow_high_order = false;

  // validate only
  int trials = 100;
  std::vector<int> n_set{3, 4, 5, 6, 7, 8};
  std::string generator = "normal";
};

inline constexpr std::uint64_t kDefaultSamples = 100000;
inline constexpr double kDefaultValidationBound = 1e-24;
inline constexpr double kDefaultAnalyticTolerance = 1e-12;
inline constexpr double kSampledSigmas = 5.0;

/// Each command writes its report to `out` and diagnostics to `err`, and
/// returns the process exit code. Errors are mapped to exit codes here.
int cmd_moments(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_pvalue(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Thread count from PERM_MOMENTS_THREADS, else 1.
unsigned default_threads();

}  // namespace pm::cli
