#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace appe {

// Exit-code contract shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitProtocolAbort = 3;

struct RunOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // beats APPE_SEED, which beats the file
};

struct SweepOptions {
  std::string config_path;
  std::string axis;  // axis=start:stop:step over alpha|length|ones|theta_bar|seed
  int seeds = 1;     // replicas per grid point (axis=seed supplies its own)
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

struct VerifyCmdOptions {
  std::string suite = "all";
  std::string mutation;
  std::string junit_path;  // empty: no result file
  std::uint64_t seed = 0x5eedULL;
};

struct BoundsOptions {
  double theta = 1.0471975511965976;  // default matches the worked examples
  double delta = 0.0;
  int length = 200;
  int ones = 100;
  std::string eta = "0.05:0.5:0.05";
  std::string out_path = "bounds.csv";
};

// Single protocol execution: writes report.json, transcript.json, rounds.csv.
int cmd_run(const RunOptions& options);

// Grid sweep: one CSV row per (grid value, seed replica).
int cmd_sweep(const SweepOptions& options);

// Invariant suites; optional JUnit-style XML result file.
int cmd_verify_suite(const VerifyCmdOptions& options);

// Closed-form bound curves over an eta grid.
int cmd_bounds(const BoundsOptions& options);

}  // namespace appe
