#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "appe/states.hpp"

namespace appe {

// Per-round supply of candidate entangled states.  An honest source is kept
// symbolic (exact GHZ) so round sampling can stay O(n); any other source
// materializes dense statevectors and is capped at kMaxDenseQubits.
class StateSource {
 public:
  static StateSource honest_ghz(int n);
  static StateSource from_factory(int n, std::function<PureState()> make,
                                  std::optional<int> budget = std::nullopt);

  int n() const { return n_; }
  bool honest() const { return honest_; }
  bool exhausted() const { return budget_ && *budget_ <= 0; }
  PureState draw();  // throws std::runtime_error once a budget runs out

 private:
  StateSource(int n, bool honest, std::function<PureState()> make,
              std::optional<int> budget);
  int n_;
  bool honest_;
  std::function<PureState()> make_;
  std::optional<int> budget_;
};

// Result of one verification round: N copies consumed, N-1 tested against
// randomly chosen stabilizer generators, the untested copy released.
// Generator g == 0 is the all-X parity test (pass iff the X outcomes have
// even parity); g in [1, n-1] measures agents g and g+1 in Z and passes iff
// the two bits agree.
struct VerifiedStateClaim {
  bool accepted = false;
  double eps_sv = 0.0;  // 0 for an honest source, configured value otherwise
  int tests_run = 0;
  int target_index = 0;             // which copy was withheld from testing
  std::vector<int> generators;      // generator chosen per tested copy
  std::vector<std::uint8_t> outcomes;  // concatenated measurement bits
  bool target_symbolic_ghz = false;
  std::optional<PureState> target;  // set when not symbolic
};

VerifiedStateClaim sv_stabilizer_verify(StateSource& source, int copies,
                                        double eps_on_accept, RngStream& rng);

// Round key: uniformly random weight-k L-bit string; kappa[j] == 1 marks a
// verification round.  A leak_fraction of positions (rounded down) is
// exposed to the adversary.
struct RoundKey {
  std::vector<std::uint8_t> kappa;
  std::vector<int> leaked_positions;  // ascending
};

RoundKey acka_generate(int length, int ones, double leak_fraction,
                       RngStream& rng);

// Entropy of the key ensemble in bits: L * h2(k / L).
double key_entropy_length(int length, int ones);

}  // namespace appe
