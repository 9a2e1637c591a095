#pragma once

#include <string>

#include <json.hpp>

#include "appe/engine.hpp"

namespace appe {

struct OutputPaths {
  std::string report = "report.json";
  std::string transcript = "transcript.json";
  std::string rounds = "rounds.csv";
};

// One experiment as read from disk: protocol settings, coalition, and where
// the result files go.
struct RunConfig {
  ProtocolConfig protocol;
  AttackSpec attack;
  OutputPaths output;
};

inline constexpr int kConfigSchemaVersion = 1;

// Strict parse: every object level rejects unknown keys, missing required
// fields, and wrong types with a message naming the offending key.  The
// parsed config is validated (protocol and attack invariants) before return.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

nlohmann::ordered_json report_to_json(const EstimationReport& report);
nlohmann::ordered_json transcript_to_json(const Transcript& transcript);

// Executed rounds only; columns: round, kind, announcements, result_bit.
std::string rounds_csv(const Transcript& transcript);

}  // namespace appe
