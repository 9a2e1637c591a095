#include "appe/oracles.hpp"

#include <algorithm>
#include <stdexcept>

#include "appe/stats.hpp"

namespace appe {

StateSource::StateSource(int n, bool honest, std::function<PureState()> make,
                         std::optional<int> budget)
    : n_(n), honest_(honest), make_(std::move(make)), budget_(budget) {
  if (n < 1) throw std::invalid_argument("source needs at least one qubit");
}

StateSource StateSource::honest_ghz(int n) {
  return StateSource(n, true, {}, std::nullopt);
}

StateSource StateSource::from_factory(int n, std::function<PureState()> make,
                                      std::optional<int> budget) {
  if (!make) throw std::invalid_argument("factory must be callable");
  return StateSource(n, false, std::move(make), budget);
}

PureState StateSource::draw() {
  if (budget_) {
    if (*budget_ <= 0) throw std::runtime_error("state source exhausted");
    --*budget_;
  }
  if (honest_) return make_ghz(n_);
  PureState s = make_();
  if (s.qubits() != n_) throw std::runtime_error("factory emitted wrong qubit count");
  return s;
}

VerifiedStateClaim sv_stabilizer_verify(StateSource& source, int copies,
                                        double eps_on_accept, RngStream& rng) {
  if (copies < 2) throw std::invalid_argument("verification needs >= 2 copies");
  const int n = source.n();

  VerifiedStateClaim claim;
  claim.target_index = static_cast<int>(rng.uniform_int(copies));
  claim.accepted = true;

  std::vector<int> all_agents(n);
  for (int a = 1; a <= n; ++a) all_agents[a - 1] = a;

  for (int c = 0; c < copies; ++c) {
    if (c == claim.target_index) {
      if (source.honest()) {
        claim.target_symbolic_ghz = true;
      } else {
        claim.target = source.draw();
      }
      continue;
    }
    const int g = static_cast<int>(rng.uniform_int(n));
    claim.generators.push_back(g);
    ++claim.tests_run;

    bool pass;
    if (source.honest()) {
      // Exact GHZ: the all-X record has even parity; a Z pair agrees.
      if (g == 0) {
        OutcomeVector bits = sample_ghz_phase_fastpath(n, 0.0, rng);
        claim.outcomes.insert(claim.outcomes.end(), bits.begin(), bits.end());
        pass = parity(bits) == 0;
      } else {
        const std::uint8_t b = rng.bit();
        claim.outcomes.push_back(b);
        claim.outcomes.push_back(b);
        pass = true;
      }
    } else {
      PureState copy = source.draw();
      if (g == 0) {
        auto result = measure_x_subset(copy, all_agents, rng);
        claim.outcomes.insert(claim.outcomes.end(), result.outcomes.begin(),
                              result.outcomes.end());
        pass = parity(result.outcomes) == 0;
      } else {
        auto result = measure_z_subset(copy, {g, g + 1}, rng);
        claim.outcomes.insert(claim.outcomes.end(), result.outcomes.begin(),
                              result.outcomes.end());
        pass = result.outcomes[0] == result.outcomes[1];
      }
    }
    if (!pass) claim.accepted = false;
  }

  claim.eps_sv = source.honest() ? 0.0 : eps_on_accept;
  if (!claim.accepted) {
    claim.target.reset();
    claim.target_symbolic_ghz = false;
  }
  return claim;
}

RoundKey acka_generate(int length, int ones, double leak_fraction,
                       RngStream& rng) {
  if (length < 1) throw std::invalid_argument("key length must be >= 1");
  if (ones < 0 || ones > length)
    throw std::invalid_argument("key weight outside [0, L]");
  if (leak_fraction < 0.0 || leak_fraction > 1.0)
    throw std::invalid_argument("leak fraction outside [0, 1]");

  // Uniform weight-k string via a partial Fisher-Yates shuffle.
  RoundKey key;
  key.kappa.assign(length, 0);
  std::vector<int> positions(length);
  for (int i = 0; i < length; ++i) positions[i] = i;
  for (int i = 0; i < ones; ++i) {
    const int j = i + static_cast<int>(rng.uniform_int(length - i));
    std::swap(positions[i], positions[j]);
    key.kappa[positions[i]] = 1;
  }

  const int leak_count = static_cast<int>(leak_fraction * length);
  for (int i = 0; i < leak_count; ++i) {
    const int j = i + static_cast<int>(rng.uniform_int(length - i));
    std::swap(positions[i], positions[j]);
  }
  key.leaked_positions.assign(positions.begin(), positions.begin() + leak_count);
  std::sort(key.leaked_positions.begin(), key.leaked_positions.end());
  return key;
}

double key_entropy_length(int length, int ones) {
  if (length < 1) throw std::invalid_argument("key length must be >= 1");
  if (ones < 0 || ones > length)
    throw std::invalid_argument("key weight outside [0, L]");
  return length * binary_entropy(static_cast<double>(ones) / length);
}

}  // namespace appe
