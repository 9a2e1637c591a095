#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "appe/rng.hpp"

namespace appe {

inline constexpr int kMaxDenseQubits = 20;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kExactTol = 1e-12;

using Amplitude = std::complex<double>;

// Measurement outcomes, one bit per measured agent in ascending agent order.
using OutcomeVector = std::vector<std::uint8_t>;

// Dense n-qubit statevector.  Agents are numbered 1..n; agent i owns bit
// position i-1 counted from the most significant bit of the basis index,
// so for n=3 the index of |b1 b2 b3> is (b1<<2)|(b2<<1)|b3.
class PureState {
 public:
  explicit PureState(int n);  // |0...0>
  PureState(int n, Eigen::VectorXcd amplitudes);

  int qubits() const { return n_; }
  std::int64_t dim() const { return static_cast<std::int64_t>(amps_.size()); }
  const Eigen::VectorXcd& data() const { return amps_; }
  Eigen::VectorXcd& data() { return amps_; }
  Amplitude amp(std::int64_t index) const { return amps_(index); }

  double norm() const { return amps_.norm(); }
  // Bit owned by `agent` (1-based) within basis index `index`.
  int bit(std::int64_t index, int agent) const;

 private:
  int n_;
  Eigen::VectorXcd amps_;
};

// Density matrix on d qubits, same bit convention as PureState.
class DensityMatrix {
 public:
  DensityMatrix(int n, Eigen::MatrixXcd rho);
  int qubits() const { return n_; }
  const Eigen::MatrixXcd& data() const { return rho_; }

 private:
  int n_;
  Eigen::MatrixXcd rho_;
};

struct MeasurementResult {
  OutcomeVector outcomes;            // ascending agent order of the subset
  std::optional<PureState> residual;  // absent when every qubit was measured
};

// (|0...0> + |1...1>)/sqrt(2).  Throws std::invalid_argument unless
// 1 <= n <= kMaxDenseQubits.
PureState make_ghz(int n);

// GHZ with a relative phase on the all-ones branch:
// (|0...0> + e^{i phase} |1...1>)/sqrt(2).
PureState make_ghz_phase(int n, double phase);

// diag(1, e^{i theta / m}) on `agent`.  m >= 1 is the announced participant
// count used as the phase divisor.
PureState apply_local_phase(const PureState& state, int agent, double theta,
                            int m);

// Arbitrary single-qubit gate; u must be unitary within kNormTol.
PureState apply_single_qubit_unitary(const PureState& state, int agent,
                                     const Eigen::Matrix2cd& u);

// X-basis measurement of `agents` (1-based, must be non-empty, sorted and
// duplicate-free).  Consumes randomness from rng; returns the outcomes and
// the renormalized residual on the unmeasured qubits.
MeasurementResult measure_x_subset(const PureState& state,
                                   const std::vector<int>& agents,
                                   RngStream& rng);

// Computational-basis measurement of a subset; same contract as above.
MeasurementResult measure_z_subset(const PureState& state,
                                   const std::vector<int>& agents,
                                   RngStream& rng);

// Partial trace keeping `agents` (ascending, proper or full subset).
DensityMatrix reduced_density(const PureState& state,
                              const std::vector<int>& agents);

// (1/2)||a - b||_1 for Hermitian a, b of equal dimension.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Samples an n-bit X-measurement record of (|0..0> + e^{i phase}|1..1>)/sqrt2
// without touching a statevector: parity is Bernoulli((1-cos phase)/2) and
// the record is uniform among strings of that parity.  Valid for any n >= 1.
OutcomeVector sample_ghz_phase_fastpath(int n, double phase, RngStream& rng);

// Exact X-basis outcome distribution of an arbitrary state (index order =
// basis index of the outcome string).  Dense; intended for small n.
Eigen::VectorXd x_basis_distribution(const PureState& state);

inline std::uint8_t parity(const OutcomeVector& bits) {
  std::uint8_t p = 0;
  for (auto b : bits) p ^= (b & 1u);
  return p;
}

}  // namespace appe
