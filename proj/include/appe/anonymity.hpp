#pragma once

#include <optional>
#include <string>
#include <vector>

#include "appe/engine.hpp"
#include "appe/stats.hpp"

namespace appe {

// A pair of role assignments an observing subset should not be able to tell
// apart: same participant count, same overlap with the probe subset G and the
// dishonest set D, and neither notifier inside G or D.
struct AnonymityTestConfig {
  int n = 0;
  int alice_a = 0;
  int alice_b = 0;
  std::vector<int> participants_a;  // ascending
  std::vector<int> participants_b;  // ascending
  std::vector<int> probe;           // G, ascending
  std::vector<int> dishonest;       // D, ascending
  std::int64_t samples = 0;
  double significance = 0.001;

  // Throws std::invalid_argument naming the violated clause.
  void validate() const;
};

struct AnonymityReport {
  ChiSquareResult chi;
  double total_variation = 0.0;
  std::int64_t samples_per_side = 0;
  bool kind_counts_visible = false;
  bool reject(double alpha) const { return chi.p_value < alpha; }
};

// Runs the protocol under both assignments and compares what the subset G u D
// observes.  Each execution is summarized by the announcement statistics the
// subset can actually compute (role bits and tally it holds, parity counts of
// the public announcement strings, split by round kind only when a subset
// member holds the round key, plus any leaked key bits and the coalition's own
// late-measurement outcomes), and the two summary samples are compared with a
// chi-square homogeneity test.
AnonymityReport transcript_indistinguishability(const AnonymityTestConfig& cfg,
                                                const ProtocolConfig& base,
                                                const AttackSpec& attack,
                                                const RngStream& rng);

struct MarginalCheck {
  double empirical_deviation = 0.0;          // max over strings, sampled
  std::optional<double> exact_deviation;     // computed exactly when n <= 6
};

// Any proper subset of X-measurement outcomes on a phase-rotated GHZ state is
// exactly uniform; full-set outcomes are parity-correlated and rejected.
MarginalCheck uniform_marginal_check(int n, const std::vector<int>& subset,
                                     double phase, std::int64_t samples,
                                     RngStream& rng);

// Residual state on the agents in `dishonest` after the complementary agents
// of a phase-theta_bar GHZ state are projected onto X outcomes
// `honest_outcomes` (listed in ascending agent order).  Cross-checked against
// the closed form before returning: in the X basis the residual amplitudes
// depend only on the string parity relative to the honest parity.
PureState dishonest_conditional_state(double theta_bar,
                                      const OutcomeVector& honest_outcomes,
                                      const std::vector<int>& dishonest);

// Deterministic projection of selected agents onto X-basis outcomes; returns
// the normalized residual on the remaining agents.
PureState project_honest_x(const PureState& state,
                           const std::vector<int>& agents,
                           const OutcomeVector& outcomes);

struct IdealOutputReport {
  double max_frequency_sigma = 0.0;   // worst per-slot deviation from 1/2
  double max_correlation_sigma = 0.0; // worst pairwise announced-bit correlation
  bool sv_roleswap_identical = false;
  std::int64_t rounds_used = 0;
};

// Structural consequences of the ideal coupling: every announcement slot is
// an unbiased independent bit, and verification transcripts do not depend on
// who holds which role.
IdealOutputReport ideal_output_check(const ProtocolConfig& cfg,
                                     const RngStream& rng);

}  // namespace appe
