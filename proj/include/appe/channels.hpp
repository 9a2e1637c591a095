#pragma once

#include <cstdint>
#include <vector>

namespace appe {

// Commit-then-reveal simultaneous broadcast.  Every agent must commit before
// any value is readable; reading early is a programming error and throws.
// A missing or failed commitment makes reveal() report failure, which the
// protocols treat as an abort.
class SimultaneousBroadcast {
 public:
  explicit SimultaneousBroadcast(int n);

  void commit(int agent, std::vector<std::uint8_t> bits);
  void mark_failed(int agent);  // agent refuses to commit
  bool reveal();                // false when any agent failed to commit
  bool revealed() const { return revealed_; }

  // Committed bits of `agent`; throws std::logic_error before reveal().
  const std::vector<std::uint8_t>& value(int agent) const;

 private:
  int n_;
  bool revealed_ = false;
  std::vector<bool> committed_;
  std::vector<bool> failed_;
  std::vector<std::vector<std::uint8_t>> values_;
};

}  // namespace appe
