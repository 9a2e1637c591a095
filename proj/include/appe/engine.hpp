#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "appe/adversary.hpp"
#include "appe/bitvec.hpp"
#include "appe/estimation.hpp"
#include "appe/oracles.hpp"
#include "appe/rng.hpp"
#include "appe/states.hpp"
#include "appe/subprotocols.hpp"

namespace appe {

// Full-run settings.  theta carries one phase per agent; non-participant
// entries are forced to zero before any round runs.
struct ProtocolConfig {
  RoleAssignment roles;
  std::vector<double> theta;
  int length = 0;        // L: total key length / round count
  int ones = 0;          // k: verification rounds; nu = L - k estimation rounds
  int m_min = 1;         // participants abort when the tally is below this
  double delta_threshold = 1.0;
  int vote_rounds = 20000;  // 0 skips the vote and trusts the true role count
  int sv_copies = 2;
  double eps_sv_accept = 0.0;  // claimed epsilon when a non-honest source passes
  bool apply_delta_correction = false;
  std::optional<double> known_delta;  // overrides delta_hat in the correction
  std::vector<double> bias_eta_grid;
  bool alice_announces_true = false;  // broken-protocol mutation (tests only)
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// One protocol round as the public record sees it.
struct RoundRecord {
  int index = 0;  // 1-based
  char kind = 'E';  // 'E' estimation, 'V' verification
  std::vector<std::uint8_t> announced;  // n bits; Alice's slot is her announced bit
  std::uint8_t alice_true = 0;
  std::uint8_t result = 0;  // chi or gamma: XOR of announcements with Alice's
                            // slot replaced by her true outcome
};

// Public log of one verification-oracle round.
struct SvRoundLog {
  int round = 0;
  bool accepted = true;
  int target_index = 0;
  std::vector<int> generators;
  std::vector<std::uint8_t> outcomes;
};

// What a single agent privately holds after a run.
struct AgentView {
  int agent = 0;
  std::uint8_t role_bit = 0;
  bool participant = false;
  double theta = 0.0;
  std::vector<std::uint8_t> kappa;  // participants only
  BitVec true_outcomes;             // one bit per executed round
  BitVec alice_random_bits;         // Alice only: announced bits per PE/PV round
};

// The coalition's extra knowledge beyond its members' agent views.
struct AdversaryView {
  std::vector<int> dishonest;
  std::vector<std::pair<int, std::uint8_t>> leaked_key;  // (round, kappa bit)
  BitVec residual_outcomes;  // delayed-measurement bits, round-major
};

struct Transcript {
  int schema_version = 1;
  int n = 0;
  std::uint64_t seed = 0;
  NotificationRecord notification_log;
  std::optional<VoteRecord> vote_log;
  std::vector<SvRoundLog> sv_log;
  std::vector<RoundRecord> rounds;
  std::vector<AgentView> views;
  AdversaryView adversary;
};

// One estimation (PE) round on an explicit verified target state.  Phases
// are applied for participants with the given divisor, the adversary's state
// hook runs, everyone measures X, and announcements are collected with
// Alice's slot replaced by a fresh random bit.
RoundRecord run_pe_round(const PureState& verified, const ProtocolConfig& cfg,
                         const AttackSpec& attack, RngStream& rng,
                         int round_index = 1, int divisor = 0);

// One verification (PV) round: as above but with no phase encoding; the
// result bit gamma is 0 for every honest round on an exact GHZ state.
RoundRecord run_pv_round(const PureState& verified, const ProtocolConfig& cfg,
                         const AttackSpec& attack, RngStream& rng,
                         int round_index = 1);

// Full protocol: notification, optional vote, key generation, L rounds of
// verify-then-dispatch, and estimation.  Aborts are reported through
// EstimationReport::abort_reason, never by throwing.
std::pair<EstimationReport, Transcript> run_appe(const ProtocolConfig& cfg,
                                                 const AttackSpec& attack,
                                                 const RngStream& root);

}  // namespace appe
