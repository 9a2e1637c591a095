#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "appe/bitvec.hpp"
#include "appe/rng.hpp"

namespace appe {

// Who plays which role.  Agents are 1..n; participant[i-1] == 1 marks agent
// i as a participant.  Alice is the notifying agent and need not be checked
// against the participant vector here; protocol-level rules live in the
// engine config validation.
struct RoleAssignment {
  int n = 0;
  int alice = 0;
  std::vector<std::uint8_t> participant;

  int m() const;
  bool is_participant(int agent) const;
  void validate() const;  // throws std::invalid_argument on malformed roles
};

// Anonymous notification.  Every agent i sends every agent j one bit per
// target k; Alice's n shares for target k XOR to participant[k-1], everyone
// else's XOR to 0.  Agent j forwards t_jk = XOR_i r_ijk to k, and agent k
// recovers z_k = XOR_j t_jk.  All message bits are retained for the
// anonymity analysis.
struct NotificationRecord {
  int n = 0;
  BitVec r;  // r[((i-1)n + (j-1))n + (k-1)]: bit for target k sent i -> j
  BitVec t;  // t[(j-1)n + (k-1)]: bit forwarded j -> k
  std::vector<std::uint8_t> z;  // z[k-1]: what agent k learns
};

NotificationRecord notification(const RoleAssignment& roles, RngStream& rng);

// One round of the anonymous parity primitive: agent i splits its input bit
// x_i into n shares of matching parity, distributes them, and announces the
// parity z_i of the shares it holds; y = XOR_i z_i = XOR_i x_i.
struct ParityRecord {
  int n = 0;
  BitVec shares;                      // shares[(i-1)n + (j-1)]: bit sent i -> j
  std::vector<std::uint8_t> announced;  // z_i, revealed simultaneously
  std::uint8_t y = 0;
  bool aborted = false;  // a broadcast commitment failed
};

ParityRecord parity_protocol(const std::vector<std::uint8_t>& inputs,
                             RngStream& rng,
                             std::optional<int> fail_agent = std::nullopt);

// Anonymous vote.  For each candidate b, s masked parity rounds are run and
// their announcement bits withheld until one simultaneous broadcast; the
// tally for b is recovered from the fraction of odd-parity rounds.
struct VoteRecord {
  int n = 0;
  int s = 0;
  bool aborted = false;
  std::string abort_reason;            // empty when not aborted
  std::array<int, 2> tally{0, 0};      // y[b]
  std::array<double, 2> sigma{0.0, 0.0};
  std::array<BitVec, 2> shares;        // per candidate: s rounds of n*n share bits
  std::array<BitVec, 2> broadcast;     // per candidate: s rounds of n stored bits
};

VoteRecord vote(const std::vector<std::uint8_t>& choices, int s, RngStream& rng,
                std::optional<int> fail_agent = std::nullopt);

// Expected odd-parity fraction when v agents vote for the candidate:
// p_v = (1 - ((n-2)/n)^v) / 2.
double vote_expected_parity(int v, int n);

// Phase C resolution: the unique integer v in [0, n] with
// |sigma - p_v| < 1/(2 e^2 n), or nothing when no or several integers fit.
std::optional<int> vote_resolve(double sigma, int n);

}  // namespace appe
