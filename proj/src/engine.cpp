#include "appe/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "appe/privacy.hpp"

namespace appe {
namespace {

struct RoundStreams {
  RngStream measure;
  RngStream announce;
  RngStream attack;
};

struct RoundOutcome {
  RoundRecord record;
  std::vector<std::uint8_t> true_bits;  // per agent; valid where measured
  std::vector<std::uint8_t> measured;   // 1 when the agent measured this round
  std::vector<std::uint8_t> residual_bits;  // delayed truthful measurements
};

std::vector<int> delayed_members(const AttackSpec& attack) {
  return attack.has(StrategyKind::DelayedMeasurement) ? attack.dishonest
                                                      : std::vector<int>{};
}

// Announcement phase shared by both sampling paths.  Honest agents announce
// their outcome, Alice announces a random bit (unless the broken-protocol
// mutation is on), coalition members go through the announce hook, and
// delayed members answer last from everything they heard.
RoundOutcome finish_round(char kind, int round_index, int n, int alice,
                          std::vector<std::uint8_t> true_bits,
                          std::vector<std::uint8_t> measured,
                          std::optional<PureState> residual,
                          const AttackSpec& attack, bool alice_true_mutation,
                          const AnnounceContext& ctx, RoundStreams& streams) {
  RoundOutcome out;
  out.true_bits = std::move(true_bits);
  out.measured = std::move(measured);

  const std::vector<int> delayed = delayed_members(attack);
  std::vector<std::uint8_t> announced(n, 0);
  const std::uint8_t alice_true = out.true_bits[alice - 1];
  announced[alice - 1] =
      alice_true_mutation ? alice_true : streams.announce.bit();

  for (int a = 1; a <= n; ++a) {
    if (a == alice || std::binary_search(delayed.begin(), delayed.end(), a))
      continue;
    announced[a - 1] =
        hook_on_announce(attack, a, out.true_bits[a - 1], ctx, streams.attack);
  }

  if (!delayed.empty()) {
    const Strategy* strategy = attack.find(StrategyKind::DelayedMeasurement);
    if (strategy->policy == "truthful") {
      std::vector<int> all_residual(residual->qubits());
      for (std::size_t i = 0; i < all_residual.size(); ++i)
        all_residual[i] = static_cast<int>(i) + 1;
      auto mres = measure_x_subset(*residual, all_residual, streams.measure);
      out.residual_bits = mres.outcomes;
      for (std::size_t i = 0; i < delayed.size(); ++i) {
        out.true_bits[delayed[i] - 1] = out.residual_bits[i];
        out.measured[delayed[i] - 1] = 1;
      }
    }
    std::vector<std::uint8_t> heard;
    for (int a = 1; a <= n; ++a)
      if (!std::binary_search(delayed.begin(), delayed.end(), a))
        heard.push_back(announced[a - 1]);
    const auto bits = delayed_announcements(*strategy, heard, out.residual_bits,
                                            static_cast<int>(delayed.size()));
    for (std::size_t i = 0; i < delayed.size(); ++i)
      announced[delayed[i] - 1] = bits[i];
  }

  std::uint8_t result = alice_true;
  for (int a = 1; a <= n; ++a)
    if (a != alice) result ^= announced[a - 1];

  out.record.index = round_index;
  out.record.kind = kind;
  out.record.announced = std::move(announced);
  out.record.alice_true = alice_true;
  out.record.result = result;
  return out;
}

RoundOutcome execute_round_dense(char kind, const PureState& verified,
                                 const RoleAssignment& roles,
                                 const std::vector<double>& theta, int divisor,
                                 const AttackSpec& attack,
                                 bool alice_true_mutation,
                                 const AnnounceContext& ctx, int round_index,
                                 RoundStreams& streams) {
  const int n = roles.n;
  PureState state = verified;
  if (kind == 'E') {
    for (int a = 1; a <= n; ++a)
      if (roles.is_participant(a))
        state = apply_local_phase(state, a, theta[a - 1], divisor);
  }
  state = hook_on_state(attack, state, streams.attack);

  const std::vector<int> delayed = delayed_members(attack);
  std::vector<std::uint8_t> true_bits(n, 0), measured(n, 0);
  std::optional<PureState> residual;
  if (delayed.empty()) {
    std::vector<int> all(n);
    for (int a = 1; a <= n; ++a) all[a - 1] = a;
    auto res = measure_x_subset(state, all, streams.measure);
    true_bits.assign(res.outcomes.begin(), res.outcomes.end());
    std::fill(measured.begin(), measured.end(), 1);
  } else {
    std::vector<int> honest;
    for (int a = 1; a <= n; ++a)
      if (!std::binary_search(delayed.begin(), delayed.end(), a))
        honest.push_back(a);
    auto res = measure_x_subset(state, honest, streams.measure);
    for (std::size_t i = 0; i < honest.size(); ++i) {
      true_bits[honest[i] - 1] = res.outcomes[i];
      measured[honest[i] - 1] = 1;
    }
    residual = std::move(res.residual);
  }
  return finish_round(kind, round_index, n, roles.alice, std::move(true_bits),
                      std::move(measured), std::move(residual), attack,
                      alice_true_mutation, ctx, streams);
}

// GHZ-diagonal fast path: valid only when no strategy touches the state and
// nobody delays, so outcomes follow the parity law directly.
RoundOutcome execute_round_fast(char kind, const RoleAssignment& roles,
                                double encoded_phase, const AttackSpec& attack,
                                bool alice_true_mutation,
                                const AnnounceContext& ctx, int round_index,
                                RoundStreams& streams) {
  const int n = roles.n;
  auto bits = sample_ghz_phase_fastpath(n, kind == 'E' ? encoded_phase : 0.0,
                                        streams.measure);
  std::vector<std::uint8_t> measured(n, 1);
  return finish_round(kind, round_index, n, roles.alice, std::move(bits),
                      std::move(measured), std::nullopt, attack,
                      alice_true_mutation, ctx, streams);
}

RoundStreams round_streams(const RngStream& root, int round_index) {
  return RoundStreams{root.fork(stream::kRound, static_cast<std::uint64_t>(round_index)),
                      root.fork(stream::kAnnounce, static_cast<std::uint64_t>(round_index)),
                      root.fork(stream::kAttack, static_cast<std::uint64_t>(round_index))};
}

}  // namespace

void ProtocolConfig::validate() const {
  roles.validate();
  if (static_cast<int>(theta.size()) != roles.n)
    throw std::invalid_argument("theta length must equal n");
  if (length < 1) throw std::invalid_argument("round count L must be >= 1");
  if (ones < 0 || ones >= length)
    throw std::invalid_argument("key weight k must satisfy 0 <= k < L");
  if (m_min < 1) throw std::invalid_argument("m_min must be >= 1");
  if (delta_threshold < 0.0 || delta_threshold > 1.0)
    throw std::invalid_argument("delta threshold outside [0,1]");
  if (vote_rounds < 0) throw std::invalid_argument("vote rounds cannot be negative");
  if (sv_copies < 2) throw std::invalid_argument("verification needs >= 2 copies");
  if (eps_sv_accept < 0.0 || eps_sv_accept > 1.0)
    throw std::invalid_argument("eps_sv outside [0,1]");
  if (known_delta && (*known_delta < 0.0 || *known_delta >= 0.5))
    throw std::invalid_argument("known delta outside [0, 1/2)");
  for (double eta : bias_eta_grid)
    if (eta < 0.0) throw std::invalid_argument("bias grid entries must be >= 0");
}

RoundRecord run_pe_round(const PureState& verified, const ProtocolConfig& cfg,
                         const AttackSpec& attack, RngStream& rng,
                         int round_index, int divisor) {
  if (verified.qubits() != cfg.roles.n)
    throw std::invalid_argument("state size does not match the network");
  if (divisor <= 0) divisor = cfg.roles.m();
  RoundStreams streams = round_streams(rng, round_index);
  AnnounceContext ctx{round_index, -1};
  std::vector<double> theta = cfg.theta;
  for (int a = 1; a <= cfg.roles.n; ++a)
    if (!cfg.roles.is_participant(a)) theta[a - 1] = 0.0;
  return execute_round_dense('E', verified, cfg.roles, theta, divisor, attack,
                             cfg.alice_announces_true, ctx, round_index, streams)
      .record;
}

RoundRecord run_pv_round(const PureState& verified, const ProtocolConfig& cfg,
                         const AttackSpec& attack, RngStream& rng,
                         int round_index) {
  if (verified.qubits() != cfg.roles.n)
    throw std::invalid_argument("state size does not match the network");
  RoundStreams streams = round_streams(rng, round_index);
  AnnounceContext ctx{round_index, -1};
  return execute_round_dense('V', verified, cfg.roles, cfg.theta, 1, attack,
                             cfg.alice_announces_true, ctx, round_index, streams)
      .record;
}

std::pair<EstimationReport, Transcript> run_appe(const ProtocolConfig& cfg,
                                                 const AttackSpec& attack,
                                                 const RngStream& root) {
  cfg.validate();
  attack.validate(cfg.roles);
  const int n = cfg.roles.n;
  if (attack.needs_statevector() && n > kMaxDenseQubits)
    throw std::invalid_argument(
        "state-level attacks need a dense statevector (n <= 20)");

  EstimationReport report;
  Transcript transcript;
  transcript.n = n;
  transcript.seed = cfg.seed;
  report.n = n;
  report.m_true = cfg.roles.m();
  report.length_configured = cfg.length;
  report.ones_configured = cfg.ones;

  // Notification: every agent learns only its own role bit.
  RngStream notif_rng = root.fork(stream::kNotification);
  transcript.notification_log = notification(cfg.roles, notif_rng);

  std::vector<double> theta = cfg.theta;
  for (int a = 1; a <= n; ++a)
    if (!cfg.roles.is_participant(a)) theta[a - 1] = 0.0;

  transcript.views.resize(n);
  for (int a = 1; a <= n; ++a) {
    AgentView& view = transcript.views[a - 1];
    view.agent = a;
    view.role_bit = transcript.notification_log.z[a - 1];
    view.participant = view.role_bit != 0;
    view.theta = theta[a - 1];
  }
  transcript.adversary.dishonest = attack.dishonest;

  // Vote: all agents learn the participant count, or the run aborts.
  int m_tally;
  if (cfg.vote_rounds > 0) {
    RngStream vote_rng = root.fork(stream::kVote);
    std::vector<std::uint8_t> choices(n);
    for (int a = 1; a <= n; ++a) choices[a - 1] = cfg.roles.is_participant(a);
    transcript.vote_log = vote(choices, cfg.vote_rounds, vote_rng);
    if (transcript.vote_log->aborted) {
      report.abort_reason = "vote-abort";
      return {report, transcript};
    }
    m_tally = transcript.vote_log->tally[1];
  } else {
    m_tally = cfg.roles.m();
  }
  report.m_tally = m_tally;
  if (m_tally < cfg.m_min) {
    report.abort_reason = "m-too-small";
    return {report, transcript};
  }

  // Round key; leaked positions go to the coalition's view.
  RngStream acka_rng = root.fork(stream::kAcka);
  RoundKey key =
      acka_generate(cfg.length, cfg.ones, attack.leak_fraction(), acka_rng);
  for (int a = 1; a <= n; ++a)
    if (cfg.roles.is_participant(a)) transcript.views[a - 1].kappa = key.kappa;
  for (int pos : key.leaked_positions)
    transcript.adversary.leaked_key.emplace_back(pos + 1, key.kappa[pos]);

  const Strategy* malicious = attack.find(StrategyKind::MaliciousSource);
  StateSource source =
      malicious ? StateSource::from_factory(n, make_named_source(malicious->source, n))
                : StateSource::honest_ghz(n);
  const bool fast = !attack.needs_statevector();

  double encoded_phase = 0.0;
  for (int a = 1; a <= n; ++a)
    if (cfg.roles.is_participant(a)) encoded_phase += theta[a - 1];
  encoded_phase /= m_tally;

  std::int64_t chi_zero = 0, gamma_one = 0;
  double eps_sv = 0.0;
  std::size_t leak_cursor = 0;

  for (int j = 1; j <= cfg.length; ++j) {
    RngStream sv_rng = root.fork(stream::kSv, static_cast<std::uint64_t>(j));
    VerifiedStateClaim claim;
    try {
      claim = sv_stabilizer_verify(source, cfg.sv_copies, cfg.eps_sv_accept, sv_rng);
    } catch (const std::runtime_error&) {
      report.abort_reason = "source-exhausted";
      break;
    }
    transcript.sv_log.push_back(SvRoundLog{j, claim.accepted, claim.target_index,
                                           claim.generators, claim.outcomes});
    while (leak_cursor < key.leaked_positions.size() &&
           key.leaked_positions[leak_cursor] < j - 1)
      ++leak_cursor;
    const bool leaked = leak_cursor < key.leaked_positions.size() &&
                        key.leaked_positions[leak_cursor] == j - 1;
    if (!claim.accepted) {
      ++report.sv_rejected;
      continue;
    }
    eps_sv = std::max(eps_sv, claim.eps_sv);

    const char kind = key.kappa[j - 1] ? 'V' : 'E';
    AnnounceContext ctx{j, leaked ? static_cast<int>(key.kappa[j - 1]) : -1};
    RoundStreams streams = round_streams(root, j);

    RoundOutcome outcome;
    if (fast && claim.target_symbolic_ghz) {
      outcome = execute_round_fast(kind, cfg.roles, encoded_phase, attack,
                                   cfg.alice_announces_true, ctx, j, streams);
    } else {
      PureState target = claim.target_symbolic_ghz ? make_ghz(n) : *claim.target;
      outcome = execute_round_dense(kind, target, cfg.roles, theta, m_tally,
                                    attack, cfg.alice_announces_true, ctx, j,
                                    streams);
    }

    for (int a = 1; a <= n; ++a)
      if (outcome.measured[a - 1])
        transcript.views[a - 1].true_outcomes.push_back(outcome.true_bits[a - 1]);
    transcript.views[cfg.roles.alice - 1].alice_random_bits.push_back(
        outcome.record.announced[cfg.roles.alice - 1]);
    for (auto b : outcome.residual_bits)
      transcript.adversary.residual_outcomes.push_back(b);

    if (kind == 'E') {
      ++report.nu_executed;
      if (outcome.record.result == 0) ++chi_zero;
    } else {
      ++report.k_executed;
      if (outcome.record.result == 1) ++gamma_one;
    }
    transcript.rounds.push_back(std::move(outcome.record));
  }

  report.eps_sv = eps_sv;
  report.eps_priv = privacy_epsilon(eps_sv);
  report.delta_hat =
      report.k_executed > 0
          ? static_cast<double>(gamma_one) / report.k_executed
          : 0.0;

  if (report.nu_executed == 0) {
    if (report.abort_reason.empty()) report.abort_reason = "no-estimation-rounds";
    return {report, transcript};
  }
  report.beta_hat = static_cast<double>(chi_zero) / report.nu_executed;
  report.theta_hat = theta_from_beta(report.beta_hat, &report.beta_clamped);
  report.variance_pred = 1.0 / report.nu_executed;

  if (cfg.apply_delta_correction) {
    const double delta = cfg.known_delta.value_or(report.delta_hat);
    try {
      bool clamped = false;
      const double beta = correct_beta(report.beta_hat, delta, &clamped);
      report.theta_corrected = theta_from_beta(beta);
      report.beta_clamped = report.beta_clamped || clamped;
    } catch (const std::domain_error&) {
      report.correction_failed = true;
    }
  }

  const int executed = report.nu_executed + report.k_executed;
  for (double eta : cfg.bias_eta_grid)
    report.bias_curve.emplace_back(
        eta, bias_bound(eta, report.theta_hat, report.delta_hat, executed,
                        report.k_executed));

  if (report.abort_reason.empty() && report.delta_hat > cfg.delta_threshold)
    report.abort_reason = "delta-threshold-exceeded";
  return {report, transcript};
}

}  // namespace appe
