#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "appe/states.hpp"
#include "appe/subprotocols.hpp"

namespace appe {

enum class StrategyKind {
  HonestAll,
  AnnounceFlip,         // flip own announced bit with probability alpha
  LocalUnitary,         // apply fixed single-qubit gates to dishonest qubits
  DelayedMeasurement,   // announce last, after hearing everyone else
  MaliciousSource,      // replace the state source
  KeyLeak,              // a fraction of round-key positions is exposed
};

struct Strategy {
  StrategyKind kind = StrategyKind::HonestAll;
  double alpha = 0.0;    // AnnounceFlip
  double trigger = 1.0;  // LocalUnitary: per-round fire probability
  std::vector<std::pair<int, Eigen::Matrix2cd>> unitaries;  // (agent, gate)
  std::string policy;    // DelayedMeasurement: truthful|constant0|constant1|echo_parity
  std::string source;    // MaliciousSource: zeros|plus|ghz_phase:<x>
  double leak_fraction = 0.0;  // KeyLeak
};

// A coalition and its ordered strategy composition.  Strategies apply in
// list order; state hooks run before announcement hooks within a round.
struct AttackSpec {
  std::vector<int> dishonest;  // ascending agent indices; never Alice
  std::vector<Strategy> strategies;

  bool has(StrategyKind kind) const;
  const Strategy* find(StrategyKind kind) const;
  double leak_fraction() const;
  bool in_coalition(int agent) const;
  // True when round states cannot be sampled by the GHZ-diagonal fast path.
  bool needs_statevector() const;
  // Throws std::invalid_argument for Alice in the coalition, out-of-range
  // agents, gate targets outside the coalition, or malformed parameters.
  void validate(const RoleAssignment& roles) const;
};

// What the announcement hook may condition on.  leaked_kappa is -1 when the
// round's key bit is unknown to the coalition, else the leaked bit value.
struct AnnounceContext {
  int round_index = 0;
  int leaked_kappa = -1;
};

// Applies MaliciousSource replacement and LocalUnitary corruption to the
// round's verified target, in strategy order.
PureState hook_on_state(const AttackSpec& spec, const PureState& state,
                        RngStream& rng);

// Announcement bit for `agent` given its true outcome.  Honest agents and
// coalition members without an announcement strategy echo the truth.
std::uint8_t hook_on_announce(const AttackSpec& spec, int agent,
                              std::uint8_t true_bit, const AnnounceContext& ctx,
                              RngStream& rng);

// Announced bits of delayed coalition members, one per member in ascending
// order, given everything they heard and their measured residual bits.
std::vector<std::uint8_t> delayed_announcements(
    const Strategy& strategy, const std::vector<std::uint8_t>& heard,
    const std::vector<std::uint8_t>& measured, int member_count);

// Named source factory for MaliciousSource configs.
std::function<PureState()> make_named_source(const std::string& name, int n);

// Named single-qubit gates for config files: x, y, z, h, s, rz:<angle>.
Eigen::Matrix2cd named_gate(const std::string& name);

}  // namespace appe
