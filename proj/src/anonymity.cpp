#include "appe/anonymity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

namespace appe {
namespace {

bool sorted_unique_in_range(const std::vector<int>& v, int n) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1 || v[i] > n) return false;
    if (i > 0 && v[i] <= v[i - 1]) return false;
  }
  return true;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<std::uint8_t> participant_flags(int n, const std::vector<int>& set) {
  std::vector<std::uint8_t> flags(n, 0);
  for (int agent : set) flags[agent - 1] = 1;
  return flags;
}

void push_count(std::string& s, std::int64_t c) {
  s.push_back(static_cast<char>(c & 0xff));
  s.push_back(static_cast<char>((c >> 8) & 0xff));
}

// Everything the subset can compute from its own registers and the public
// ones.  Per-round raw strings are summarized into parity counts so the bin
// space stays small enough for the homogeneity test to have power; the
// subset's quantum registers are covered by the exact reduced-state checks.
std::string restricted_view(const EstimationReport& report,
                            const Transcript& transcript,
                            const std::vector<int>& members,
                            bool kappa_visible) {
  std::string rec;
  for (int a : members)
    rec.push_back(static_cast<char>(transcript.views[a - 1].role_bit));
  push_count(rec, report.m_tally);

  std::int64_t xor_zero = 0, e_zero = 0, v_one = 0;
  for (const RoundRecord& round : transcript.rounds) {
    std::uint8_t x = 0;
    for (std::uint8_t b : round.announced) x ^= b;
    if (x == 0) ++xor_zero;
    if (round.kind == 'E' && x == 0) ++e_zero;
    if (round.kind == 'V' && x == 1) ++v_one;
  }
  if (kappa_visible) {
    push_count(rec, e_zero);
    push_count(rec, v_one);
  } else {
    push_count(rec, xor_zero);
  }

  std::int64_t residual_zero = 0;
  for (std::size_t i = 0; i < transcript.adversary.residual_outcomes.size(); ++i)
    if (transcript.adversary.residual_outcomes.get(i) == 0) ++residual_zero;
  push_count(rec, residual_zero);

  push_count(rec, static_cast<std::int64_t>(transcript.adversary.leaked_key.size()));
  for (const auto& [round, bit] : transcript.adversary.leaked_key) {
    push_count(rec, round);
    rec.push_back(static_cast<char>(bit));
  }
  rec.push_back('|');
  rec += report.abort_reason;
  return rec;
}

}  // namespace

void AnonymityTestConfig::validate() const {
  if (n < 2) throw std::invalid_argument("network too small");
  if (alice_a < 1 || alice_a > n || alice_b < 1 || alice_b > n)
    throw std::invalid_argument("notifier index out of range");
  if (participants_a.empty() || participants_b.empty())
    throw std::invalid_argument("empty participant set");
  if (!sorted_unique_in_range(participants_a, n) ||
      !sorted_unique_in_range(participants_b, n))
    throw std::invalid_argument("participant sets must be ascending agent indices");
  if (!sorted_unique_in_range(probe, n) || !sorted_unique_in_range(dishonest, n))
    throw std::invalid_argument("probe and dishonest sets must be ascending agent indices");
  if (samples < 1) throw std::invalid_argument("sample count must be positive");
  if (significance <= 0.0 || significance >= 1.0)
    throw std::invalid_argument("significance outside (0,1)");

  auto in = [](const std::vector<int>& v, int x) {
    return std::binary_search(v.begin(), v.end(), x);
  };
  if (in(probe, alice_a) || in(dishonest, alice_a) || in(probe, alice_b) ||
      in(dishonest, alice_b))
    throw std::invalid_argument("notifier inside the probe or dishonest set");
  if (intersect(participants_a, dishonest) != intersect(participants_b, dishonest))
    throw std::invalid_argument("participant overlap with the dishonest set differs");
  if (intersect(participants_a, probe) != intersect(participants_b, probe))
    throw std::invalid_argument("participant overlap with the probe subset differs");
  if (participants_a.size() != participants_b.size())
    throw std::invalid_argument("participant counts differ");
}

AnonymityReport transcript_indistinguishability(const AnonymityTestConfig& cfg,
                                                const ProtocolConfig& base,
                                                const AttackSpec& attack,
                                                const RngStream& rng) {
  cfg.validate();
  if (base.roles.n != cfg.n)
    throw std::invalid_argument("protocol settings sized for a different network");
  if (!attack.dishonest.empty() && attack.dishonest != cfg.dishonest)
    throw std::invalid_argument("attack coalition must match the dishonest set");

  std::vector<int> members;
  std::set_union(cfg.probe.begin(), cfg.probe.end(), cfg.dishonest.begin(),
                 cfg.dishonest.end(), std::back_inserter(members));

  ProtocolConfig scenario[2] = {base, base};
  scenario[0].roles =
      RoleAssignment{cfg.n, cfg.alice_a, participant_flags(cfg.n, cfg.participants_a)};
  scenario[1].roles =
      RoleAssignment{cfg.n, cfg.alice_b, participant_flags(cfg.n, cfg.participants_b)};
  const bool kappa_visible =
      !intersect(members, cfg.participants_a).empty();

  std::map<std::string, std::pair<std::int64_t, std::int64_t>> bins;
  for (int side = 0; side < 2; ++side) {
    scenario[side].validate();
    for (std::int64_t s = 0; s < cfg.samples; ++s) {
      RngStream root = rng.fork(stream::kTest, static_cast<std::uint64_t>(side),
                                static_cast<std::uint64_t>(s));
      auto [report, transcript] = run_appe(scenario[side], attack, root);
      const std::string rec =
          restricted_view(report, transcript, members, kappa_visible);
      if (side == 0)
        ++bins[rec].first;
      else
        ++bins[rec].second;
    }
  }

  AnonymityReport out;
  out.samples_per_side = cfg.samples;
  out.kind_counts_visible = kappa_visible;
  out.chi = chi_square_homogeneity(bins);
  out.total_variation = total_variation(bins);
  return out;
}

MarginalCheck uniform_marginal_check(int n, const std::vector<int>& subset,
                                     double phase, std::int64_t samples,
                                     RngStream& rng) {
  if (n < 2) throw std::invalid_argument("network too small");
  std::vector<int> a = subset;
  std::sort(a.begin(), a.end());
  if (!sorted_unique_in_range(a, n))
    throw std::invalid_argument("subset entries must be distinct agent indices");
  if (a.empty() || static_cast<int>(a.size()) == n)
    throw std::invalid_argument(
        "subset must be proper: full-set outcomes are parity-correlated");

  const double uniform = std::pow(2.0, -static_cast<double>(a.size()));
  MarginalCheck check;

  if (n <= 6) {
    const Eigen::VectorXd probs = x_basis_distribution(make_ghz_phase(n, phase));
    std::vector<double> marginal(std::size_t{1} << a.size(), 0.0);
    for (Eigen::Index x = 0; x < probs.size(); ++x) {
      std::size_t key = 0;
      for (int agent : a) key = (key << 1) | ((x >> (n - agent)) & 1);
      marginal[key] += probs(x);
    }
    double dev = 0.0;
    for (double p : marginal) dev = std::max(dev, std::abs(p - uniform));
    check.exact_deviation = dev;
  }

  if (samples > 0) {
    std::vector<std::int64_t> counts(std::size_t{1} << a.size(), 0);
    for (std::int64_t s = 0; s < samples; ++s) {
      const auto bits = sample_ghz_phase_fastpath(n, phase, rng);
      std::size_t key = 0;
      for (int agent : a) key = (key << 1) | bits[agent - 1];
      ++counts[key];
    }
    double dev = 0.0;
    for (std::int64_t c : counts)
      dev = std::max(dev, std::abs(static_cast<double>(c) / samples - uniform));
    check.empirical_deviation = dev;
  }
  return check;
}

PureState project_honest_x(const PureState& state,
                           const std::vector<int>& agents,
                           const OutcomeVector& outcomes) {
  const int n = state.qubits();
  if (!sorted_unique_in_range(agents, n))
    throw std::invalid_argument("projection agents must be ascending indices");
  if (agents.size() != outcomes.size())
    throw std::invalid_argument("one outcome per projected agent");
  if (agents.empty() || static_cast<int>(agents.size()) >= n)
    throw std::invalid_argument("projection must leave a nonempty remainder");

  static const Eigen::Matrix2cd h =
      (Eigen::Matrix2cd() << 1.0, 1.0, 1.0, -1.0).finished() / std::sqrt(2.0);
  PureState rotated = state;
  for (int agent : agents) rotated = apply_single_qubit_unitary(rotated, agent, h);

  std::vector<int> remaining;
  for (int agent = 1; agent <= n; ++agent)
    if (!std::binary_search(agents.begin(), agents.end(), agent))
      remaining.push_back(agent);

  const Eigen::Index dim_out = Eigen::Index{1} << remaining.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_out);
  const Eigen::Index dim = rotated.data().size();
  for (Eigen::Index x = 0; x < dim; ++x) {
    bool match = true;
    for (std::size_t i = 0; i < agents.size() && match; ++i)
      match = ((x >> (n - agents[i])) & 1) == outcomes[i];
    if (!match) continue;
    Eigen::Index key = 0;
    for (int agent : remaining) key = (key << 1) | ((x >> (n - agent)) & 1);
    out(key) = rotated.data()(x);
  }
  const double norm = out.norm();
  if (norm < 1e-12) throw std::logic_error("projection annihilated the state");
  return PureState(static_cast<int>(remaining.size()), out / norm);
}

PureState dishonest_conditional_state(double theta_bar,
                                      const OutcomeVector& honest_outcomes,
                                      const std::vector<int>& dishonest) {
  if (dishonest.empty()) throw std::invalid_argument("dishonest set is empty");
  const int n = static_cast<int>(honest_outcomes.size() + dishonest.size());
  if (n > kMaxDenseQubits) throw std::invalid_argument("network too large");
  if (!sorted_unique_in_range(dishonest, n))
    throw std::invalid_argument("dishonest set must be ascending agent indices");
  if (honest_outcomes.empty())
    throw std::invalid_argument("no honest agents to project");

  std::vector<int> honest;
  for (int agent = 1; agent <= n; ++agent)
    if (!std::binary_search(dishonest.begin(), dishonest.end(), agent))
      honest.push_back(agent);

  const PureState residual = project_honest_x(make_ghz_phase(n, theta_bar),
                                              honest, honest_outcomes);

  // Closed form in the X basis of the remaining agents: amplitude depends
  // only on whether the string parity matches the honest parity.
  const int d = static_cast<int>(dishonest.size());
  std::uint8_t honest_parity = 0;
  for (std::uint8_t b : honest_outcomes) honest_parity ^= b;
  const std::complex<double> phase = std::polar(1.0, theta_bar);
  Eigen::VectorXcd closed(Eigen::Index{1} << d);
  for (Eigen::Index c = 0; c < closed.size(); ++c) {
    const std::uint8_t string_parity =
        std::popcount(static_cast<std::uint64_t>(c)) & 1u;
    closed(c) = (string_parity ^ honest_parity) == 0 ? (1.0 + phase) : (1.0 - phase);
  }
  closed /= closed.norm();

  static const Eigen::Matrix2cd h =
      (Eigen::Matrix2cd() << 1.0, 1.0, 1.0, -1.0).finished() / std::sqrt(2.0);
  PureState residual_x = residual;
  for (int q = 1; q <= d; ++q)
    residual_x = apply_single_qubit_unitary(residual_x, q, h);
  const double fidelity = std::abs(residual_x.data().dot(closed));
  if (std::abs(fidelity - 1.0) > 1e-10)
    throw std::logic_error("conditional state disagrees with its closed form");
  return residual;
}

IdealOutputReport ideal_output_check(const ProtocolConfig& cfg,
                                     const RngStream& rng) {
  IdealOutputReport out;
  RngStream root = rng.fork(stream::kTest, 1);
  auto [report, transcript] = run_appe(cfg, AttackSpec{}, root);

  const int n = cfg.roles.n;
  const std::int64_t rounds = static_cast<std::int64_t>(transcript.rounds.size());
  out.rounds_used = rounds;
  if (rounds > 0) {
    std::vector<std::int64_t> zeros(n, 0);
    std::vector<std::vector<std::int64_t>> agree(n, std::vector<std::int64_t>(n, 0));
    for (const RoundRecord& round : transcript.rounds) {
      for (int i = 0; i < n; ++i) {
        if (round.announced[i] == 0) ++zeros[i];
        for (int j = i + 1; j < n; ++j)
          if (round.announced[i] == round.announced[j]) ++agree[i][j];
      }
    }
    const double half_sd = std::sqrt(static_cast<double>(rounds)) / 2.0;
    for (int i = 0; i < n; ++i) {
      out.max_frequency_sigma =
          std::max(out.max_frequency_sigma,
                   std::abs(zeros[i] - rounds / 2.0) / half_sd);
      for (int j = i + 1; j < n; ++j) {
        const double s = 2.0 * agree[i][j] - rounds;  // sum of +-1 agreements
        out.max_correlation_sigma =
            std::max(out.max_correlation_sigma,
                     std::abs(s) / std::sqrt(static_cast<double>(rounds)));
      }
    }
  }

  // Same seed, rotated roles: the verification log must not move.
  ProtocolConfig swapped = cfg;
  std::vector<std::uint8_t> rotated(n, 0);
  for (int a = 1; a <= n; ++a)
    if (cfg.roles.is_participant(a)) rotated[a % n] = 1;
  swapped.roles = RoleAssignment{n, cfg.roles.alice % n + 1, rotated};
  RngStream root2 = rng.fork(stream::kTest, 1);
  auto [report2, transcript2] = run_appe(swapped, AttackSpec{}, root2);

  auto serialize_sv = [](const std::vector<SvRoundLog>& log) {
    std::string s;
    for (const auto& entry : log) {
      push_count(s, entry.round);
      s.push_back(static_cast<char>(entry.accepted));
      push_count(s, entry.target_index);
      for (int g : entry.generators) push_count(s, g);
      for (std::uint8_t b : entry.outcomes) s.push_back(static_cast<char>(b));
      s.push_back(';');
    }
    return s;
  };
  out.sv_roleswap_identical =
      serialize_sv(transcript.sv_log) == serialize_sv(transcript2.sv_log);
  return out;
}

}  // namespace appe
