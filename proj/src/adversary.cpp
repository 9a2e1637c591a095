#include "appe/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace appe {

bool AttackSpec::has(StrategyKind kind) const { return find(kind) != nullptr; }

const Strategy* AttackSpec::find(StrategyKind kind) const {
  for (const auto& s : strategies)
    if (s.kind == kind) return &s;
  return nullptr;
}

double AttackSpec::leak_fraction() const {
  const Strategy* leak = find(StrategyKind::KeyLeak);
  return leak ? leak->leak_fraction : 0.0;
}

bool AttackSpec::in_coalition(int agent) const {
  return std::binary_search(dishonest.begin(), dishonest.end(), agent);
}

bool AttackSpec::needs_statevector() const {
  return has(StrategyKind::LocalUnitary) || has(StrategyKind::MaliciousSource) ||
         has(StrategyKind::DelayedMeasurement);
}

void AttackSpec::validate(const RoleAssignment& roles) const {
  for (std::size_t i = 0; i < dishonest.size(); ++i) {
    if (dishonest[i] < 1 || dishonest[i] > roles.n)
      throw std::invalid_argument("dishonest agent out of range");
    if (i > 0 && dishonest[i] <= dishonest[i - 1])
      throw std::invalid_argument("dishonest set must be strictly ascending");
    if (dishonest[i] == roles.alice)
      throw std::invalid_argument("the notifying agent cannot join the coalition");
  }
  for (const auto& s : strategies) {
    switch (s.kind) {
      case StrategyKind::HonestAll:
        break;
      case StrategyKind::AnnounceFlip:
        if (s.alpha < 0.0 || s.alpha > 1.0)
          throw std::invalid_argument("flip probability outside [0,1]");
        if (dishonest.empty())
          throw std::invalid_argument("announcement attack needs a coalition");
        break;
      case StrategyKind::LocalUnitary:
        if (s.trigger < 0.0 || s.trigger > 1.0)
          throw std::invalid_argument("trigger probability outside [0,1]");
        if (s.unitaries.empty())
          throw std::invalid_argument("local unitary attack needs gates");
        for (const auto& [agent, u] : s.unitaries) {
          if (!in_coalition(agent))
            throw std::invalid_argument("gate target outside the coalition");
          if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() >
              kNormTol)
            throw std::invalid_argument("attack gate is not unitary");
        }
        break;
      case StrategyKind::DelayedMeasurement:
        if (s.policy != "truthful" && s.policy != "constant0" &&
            s.policy != "constant1" && s.policy != "echo_parity")
          throw std::invalid_argument("unknown delayed-measurement policy");
        if (dishonest.empty())
          throw std::invalid_argument("delayed measurement needs a coalition");
        break;
      case StrategyKind::MaliciousSource:
        make_named_source(s.source, roles.n);  // throws on unknown name
        break;
      case StrategyKind::KeyLeak:
        if (s.leak_fraction < 0.0 || s.leak_fraction > 1.0)
          throw std::invalid_argument("leak fraction outside [0,1]");
        break;
    }
  }
}

PureState hook_on_state(const AttackSpec& spec, const PureState& state,
                        RngStream& rng) {
  PureState current = state;
  for (const auto& s : spec.strategies) {
    if (s.kind == StrategyKind::MaliciousSource) {
      current = make_named_source(s.source, current.qubits())();
    } else if (s.kind == StrategyKind::LocalUnitary) {
      if (rng.bernoulli(s.trigger))
        for (const auto& [agent, u] : s.unitaries)
          current = apply_single_qubit_unitary(current, agent, u);
    }
  }
  return current;
}

std::uint8_t hook_on_announce(const AttackSpec& spec, int agent,
                              std::uint8_t true_bit, const AnnounceContext& ctx,
                              RngStream& rng) {
  if (!spec.in_coalition(agent)) return true_bit;
  std::uint8_t bit = true_bit;
  for (const auto& s : spec.strategies) {
    if (s.kind != StrategyKind::AnnounceFlip) continue;
    // Leaked verification rounds are left clean; leaked estimation rounds
    // and unknown rounds are attacked at the configured rate.
    if (ctx.leaked_kappa == 1) continue;
    if (rng.bernoulli(s.alpha)) bit ^= 1u;
  }
  return bit;
}

std::vector<std::uint8_t> delayed_announcements(
    const Strategy& strategy, const std::vector<std::uint8_t>& heard,
    const std::vector<std::uint8_t>& measured, int member_count) {
  std::vector<std::uint8_t> out(member_count, 0);
  if (strategy.policy == "truthful") {
    if (static_cast<int>(measured.size()) != member_count)
      throw std::invalid_argument("truthful policy needs one measured bit per member");
    out = measured;
  } else if (strategy.policy == "constant0") {
    // already zero
  } else if (strategy.policy == "constant1") {
    std::fill(out.begin(), out.end(), 1);
  } else if (strategy.policy == "echo_parity") {
    std::uint8_t p = 0;
    for (auto b : heard) p ^= (b & 1u);
    std::fill(out.begin(), out.end(), p);
  } else {
    throw std::invalid_argument("unknown delayed-measurement policy");
  }
  return out;
}

std::function<PureState()> make_named_source(const std::string& name, int n) {
  if (name == "zeros") {
    return [n] { return PureState(n); };
  }
  if (name == "plus") {
    return [n] {
      const std::int64_t dim = std::int64_t{1} << n;
      Eigen::VectorXcd amps =
          Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
      return PureState(n, std::move(amps));
    };
  }
  constexpr const char* kGhzPrefix = "ghz_phase:";
  if (name.rfind(kGhzPrefix, 0) == 0) {
    const double phase = std::stod(name.substr(std::string(kGhzPrefix).size()));
    return [n, phase] { return make_ghz_phase(n, phase); };
  }
  throw std::invalid_argument("unknown source state: " + name);
}

Eigen::Matrix2cd named_gate(const std::string& name) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd u;
  if (name == "x") {
    u << 0, 1, 1, 0;
  } else if (name == "y") {
    u << 0, -1i, 1i, 0;
  } else if (name == "z") {
    u << 1, 0, 0, -1;
  } else if (name == "h") {
    const double s = 0.7071067811865475244;
    u << s, s, s, -s;
  } else if (name == "s") {
    u << 1, 0, 0, 1i;
  } else if (name.rfind("rz:", 0) == 0) {
    const double phi = std::stod(name.substr(3));
    u << 1, 0, 0, std::polar(1.0, phi);
  } else {
    throw std::invalid_argument("unknown gate: " + name);
  }
  return u;
}

}  // namespace appe
