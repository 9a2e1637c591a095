#include "appe/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace appe {
namespace {

void check_agent(int agent, int n) {
  if (agent < 1 || agent > n) throw std::invalid_argument("agent index out of range");
}

void check_subset(const std::vector<int>& agents, int n) {
  if (agents.empty()) throw std::invalid_argument("subset must be non-empty");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    check_agent(agents[i], n);
    if (i > 0 && agents[i] <= agents[i - 1])
      throw std::invalid_argument("subset must be strictly ascending");
  }
}

// Shift that isolates the bit owned by `agent` in an n-qubit index.
inline int shift_of(int agent, int n) { return n - agent; }

constexpr Amplitude kInvSqrt2{0.7071067811865475244, 0.0};

// Generic subset measurement.  `x_basis` rotates the measured qubits with H
// before sampling, which is exactly an X measurement.
MeasurementResult measure_subset(const PureState& state,
                                 const std::vector<int>& agents, RngStream& rng,
                                 bool x_basis) {
  const int n = state.qubits();
  check_subset(agents, n);

  Eigen::VectorXcd psi = state.data();
  if (x_basis) {
    for (int a : agents) {
      const std::int64_t stride = std::int64_t{1} << shift_of(a, n);
      for (std::int64_t base = 0; base < psi.size(); base += 2 * stride) {
        for (std::int64_t i = base; i < base + stride; ++i) {
          const Amplitude lo = psi(i), hi = psi(i + stride);
          psi(i) = (lo + hi) * kInvSqrt2;
          psi(i + stride) = (lo - hi) * kInvSqrt2;
        }
      }
    }
  }

  OutcomeVector outcomes;
  outcomes.reserve(agents.size());
  for (int a : agents) {
    const int sh = shift_of(a, n);
    double p0 = 0.0, p1 = 0.0;
    for (std::int64_t i = 0; i < psi.size(); ++i)
      (((i >> sh) & 1) == 0 ? p0 : p1) += std::norm(psi(i));
    const std::uint8_t bit = rng.uniform() * (p0 + p1) < p0 ? 0 : 1;
    outcomes.push_back(bit);
    double keep = 0.0;
    for (std::int64_t i = 0; i < psi.size(); ++i) {
      if (((i >> sh) & 1) != bit)
        psi(i) = Amplitude{0.0, 0.0};
      else
        keep += std::norm(psi(i));
    }
    psi /= std::sqrt(keep);
  }

  if (static_cast<int>(agents.size()) == n)
    return MeasurementResult{std::move(outcomes), std::nullopt};

  // Collapse the measured qubits out of the index.
  std::vector<int> kept;
  for (int a = 1; a <= n; ++a)
    if (!std::binary_search(agents.begin(), agents.end(), a)) kept.push_back(a);
  const int r = static_cast<int>(kept.size());
  std::int64_t fixed = 0;
  for (std::size_t j = 0; j < agents.size(); ++j)
    fixed |= std::int64_t{outcomes[j]} << shift_of(agents[j], n);
  Eigen::VectorXcd res(std::int64_t{1} << r);
  for (std::int64_t idx = 0; idx < res.size(); ++idx) {
    std::int64_t full = fixed;
    for (int j = 0; j < r; ++j) {
      const std::int64_t b = (idx >> (r - 1 - j)) & 1;
      full |= b << shift_of(kept[j], n);
    }
    res(idx) = psi(full);
  }
  return MeasurementResult{std::move(outcomes), PureState(r, std::move(res))};
}

}  // namespace

PureState::PureState(int n) : n_(n) {
  if (n < 1 || n > kMaxDenseQubits)
    throw std::invalid_argument("qubit count outside [1, 20]");
  amps_ = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  amps_(0) = 1.0;
}

PureState::PureState(int n, Eigen::VectorXcd amplitudes) : n_(n), amps_(std::move(amplitudes)) {
  if (n < 1 || n > kMaxDenseQubits)
    throw std::invalid_argument("qubit count outside [1, 20]");
  if (amps_.size() != (std::int64_t{1} << n))
    throw std::invalid_argument("amplitude vector has wrong dimension");
  if (std::abs(amps_.norm() - 1.0) > kNormTol)
    throw std::invalid_argument("state is not normalized");
}

int PureState::bit(std::int64_t index, int agent) const {
  check_agent(agent, n_);
  return static_cast<int>((index >> shift_of(agent, n_)) & 1);
}

DensityMatrix::DensityMatrix(int n, Eigen::MatrixXcd rho) : n_(n), rho_(std::move(rho)) {
  const std::int64_t d = std::int64_t{1} << n;
  if (rho_.rows() != d || rho_.cols() != d)
    throw std::invalid_argument("density matrix has wrong dimension");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kNormTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho_.trace().real() - 1.0) > kNormTol)
    throw std::invalid_argument("density matrix trace is not 1");
}

PureState make_ghz(int n) { return make_ghz_phase(n, 0.0); }

PureState make_ghz_phase(int n, double phase) {
  if (n < 1 || n > kMaxDenseQubits)
    throw std::invalid_argument("qubit count outside [1, 20]");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  amps(0) = kInvSqrt2;
  amps(amps.size() - 1) = std::polar(0.7071067811865475244, phase);
  return PureState(n, std::move(amps));
}

PureState apply_local_phase(const PureState& state, int agent, double theta, int m) {
  check_agent(agent, state.qubits());
  if (m < 1) throw std::invalid_argument("phase divisor must be >= 1");
  const int sh = shift_of(agent, state.qubits());
  const Amplitude phase = std::polar(1.0, theta / m);
  Eigen::VectorXcd amps = state.data();
  for (std::int64_t i = 0; i < amps.size(); ++i)
    if ((i >> sh) & 1) amps(i) *= phase;
  return PureState(state.qubits(), std::move(amps));
}

PureState apply_single_qubit_unitary(const PureState& state, int agent,
                                     const Eigen::Matrix2cd& u) {
  check_agent(agent, state.qubits());
  if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kNormTol)
    throw std::invalid_argument("gate is not unitary");
  const std::int64_t stride = std::int64_t{1} << shift_of(agent, state.qubits());
  Eigen::VectorXcd amps = state.data();
  for (std::int64_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::int64_t i = base; i < base + stride; ++i) {
      const Amplitude lo = amps(i), hi = amps(i + stride);
      amps(i) = u(0, 0) * lo + u(0, 1) * hi;
      amps(i + stride) = u(1, 0) * lo + u(1, 1) * hi;
    }
  }
  return PureState(state.qubits(), std::move(amps));
}

MeasurementResult measure_x_subset(const PureState& state,
                                   const std::vector<int>& agents, RngStream& rng) {
  return measure_subset(state, agents, rng, true);
}

MeasurementResult measure_z_subset(const PureState& state,
                                   const std::vector<int>& agents, RngStream& rng) {
  return measure_subset(state, agents, rng, false);
}

DensityMatrix reduced_density(const PureState& state, const std::vector<int>& agents) {
  const int n = state.qubits();
  check_subset(agents, n);
  std::vector<int> traced;
  for (int a = 1; a <= n; ++a)
    if (!std::binary_search(agents.begin(), agents.end(), a)) traced.push_back(a);
  const int d = static_cast<int>(agents.size());
  const int t = static_cast<int>(traced.size());
  const auto& psi = state.data();

  auto full_index = [&](std::int64_t keep_idx, std::int64_t env_idx) {
    std::int64_t full = 0;
    for (int j = 0; j < d; ++j)
      full |= ((keep_idx >> (d - 1 - j)) & 1) << shift_of(agents[j], n);
    for (int j = 0; j < t; ++j)
      full |= ((env_idx >> (t - 1 - j)) & 1) << shift_of(traced[j], n);
    return full;
  };

  const std::int64_t dim = std::int64_t{1} << d;
  const std::int64_t env = std::int64_t{1} << t;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t c = 0; c < dim; ++c) {
      Amplitude sum{0.0, 0.0};
      for (std::int64_t e = 0; e < env; ++e)
        sum += psi(full_index(r, e)) * std::conj(psi(full_index(c, e)));
      rho(r, c) = sum;
    }
  return DensityMatrix(d, std::move(rho));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.qubits() != b.qubits())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.data() - b.data(),
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

OutcomeVector sample_ghz_phase_fastpath(int n, double phase, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
  const double p_odd = 0.5 * (1.0 - std::cos(phase));
  const std::uint8_t target = rng.bernoulli(p_odd) ? 1 : 0;
  OutcomeVector bits(n);
  std::uint8_t acc = 0;
  for (int i = 0; i + 1 < n; ++i) {
    bits[i] = rng.bit();
    acc ^= bits[i];
  }
  bits[n - 1] = acc ^ target;
  return bits;
}

Eigen::VectorXd x_basis_distribution(const PureState& state) {
  const int n = state.qubits();
  Eigen::VectorXcd psi = state.data();
  for (int a = 1; a <= n; ++a) {
    const std::int64_t stride = std::int64_t{1} << shift_of(a, n);
    for (std::int64_t base = 0; base < psi.size(); base += 2 * stride) {
      for (std::int64_t i = base; i < base + stride; ++i) {
        const Amplitude lo = psi(i), hi = psi(i + stride);
        psi(i) = (lo + hi) * kInvSqrt2;
        psi(i + stride) = (lo - hi) * kInvSqrt2;
      }
    }
  }
  return psi.cwiseAbs2();
}

}  // namespace appe
