#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace appe {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::string suite = "all";  // all|core|subprotocols|integrity|privacy|anonymity
  std::string mutation;       // empty, or a named negative-control mutation
  std::uint64_t seed = 0x5eedULL;
};

// Runs the selected invariant checks.  Unknown suite or mutation names throw
// std::invalid_argument (the CLI turns that into a usage error).  Mutations
// deliberately break the protocol; the affected checks are then expected to
// fail, which is how the negative controls are exercised.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

std::string junit_xml(const std::vector<CheckResult>& results);

}  // namespace appe
