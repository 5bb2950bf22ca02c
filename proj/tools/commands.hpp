#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dzeta::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputError = 2,
  kNumericalBreakdown = 3,
  kNonConvergence = 4,
};

/// Settings shared by every command. Flags override the --config file, which
/// overrides these defaults.
struct RunConfig {
  std::filesystem::path zeros_path;
  long digits = 50;
  std::filesystem::path output_dir = ".";
  unsigned threads = 1;
  bool deterministic = false;
};

struct DeltaOptions {
  std::optional<int> n;
  bool ladder = false;
  int m_max = 0;
  bool estimate = true;
};

struct HuntOptions {
  std::filesystem::path table;
  std::vector<std::string> targets;  // "rho:9-15", "trivial:1,2", "eta:1"
  int max_iter = 100;
  std::optional<long> tol_digits;
  std::optional<std::filesystem::path> report;
};

struct LevelsOptions {
  std::filesystem::path table;
  std::optional<long> n_max;
  long window = 60;
  bool include_primes = false;
  std::optional<long> sublevel;
};

struct DivideOptions {
  std::filesystem::path table;
  long terms = 0;
  bool check = false;
  std::optional<std::filesystem::path> output;
};

struct ZerosOptions {
  std::string action;  // verify | refine
  std::string indices;  // "1,3-5"; empty = all
  std::optional<std::filesystem::path> output;
  double max_height = 400.0;
};

struct EvalOptions {
  std::string function = "zeta";  // zeta | eta | delta | rational
  std::string re = "0.5";
  std::string im = "0";
  std::optional<std::filesystem::path> table;
  long terms = 2;
  std::size_t print_digits = 40;
};

// Each command writes its human-readable report to `out` and returns an
// ExitCode; module errors propagate as exceptions and are mapped by run().
int cmd_delta(const RunConfig& cfg, const DeltaOptions& opts, std::ostream& out);
int cmd_hunt(const RunConfig& cfg, const HuntOptions& opts, std::ostream& out);
int cmd_levels(const RunConfig& cfg, const LevelsOptions& opts, std::ostream& out);
int cmd_divide(const RunConfig& cfg, const DivideOptions& opts, std::ostream& out);
int cmd_zeros(const RunConfig& cfg, const ZerosOptions& opts, std::ostream& out);
int cmd_eval(const RunConfig& cfg, const EvalOptions& opts, std::ostream& out);

/// Parses "1,3-5,9" into {1,3,4,5,9}.
std::vector<long> parse_index_list(const std::string& text);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::filesystem::path& path);

/// Path of the bundled 32-zero dataset.
std::filesystem::path default_zeros_path();

/// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dzeta::cli
