#include "appe/privacy.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace appe {
namespace {

void check_family_args(int n, const std::vector<double>& theta,
                       const std::vector<int>& divisors) {
  if (n < 1 || n > kMaxDenseQubits)
    throw std::invalid_argument("network size out of range");
  if (static_cast<int>(theta.size()) != n ||
      static_cast<int>(divisors.size()) != n)
    throw std::invalid_argument("theta and divisors must have one entry per agent");
  for (int d : divisors)
    if (d < 1) throw std::invalid_argument("divisors must be positive");
}

// Gauge fix: rotate the global phase so the reference amplitude is real and
// positive, making finite differences of the vector well defined.
Eigen::VectorXcd gauge_fixed(const Eigen::VectorXcd& v) {
  Eigen::Index ref = 0;
  v.cwiseAbs().maxCoeff(&ref);
  const std::complex<double> a = v(ref);
  return v * (std::abs(a) / a);
}

}  // namespace

PureState encoded_state(int n, const std::vector<double>& theta,
                        const std::vector<int>& divisors) {
  check_family_args(n, theta, divisors);
  PureState state = make_ghz(n);
  for (int a = 1; a <= n; ++a)
    state = apply_local_phase(state, a, theta[a - 1], divisors[a - 1]);
  return state;
}

PureState encoded_state_uniform(int n, const std::vector<double>& theta,
                                int divisor) {
  return encoded_state(n, theta, std::vector<int>(n, divisor));
}

std::vector<Eigen::VectorXcd> encoded_derivatives(
    int n, const std::vector<double>& theta, const std::vector<int>& divisors) {
  check_family_args(n, theta, divisors);
  const PureState psi = encoded_state(n, theta, divisors);
  const Eigen::Index dim = psi.data().size();
  std::vector<Eigen::VectorXcd> derivs;
  derivs.reserve(n);
  const std::complex<double> iu(0.0, 1.0);
  for (int a = 1; a <= n; ++a) {
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(dim);
    const int shift = n - a;
    const double scale = 1.0 / divisors[a - 1];
    for (Eigen::Index x = 0; x < dim; ++x)
      if ((x >> shift) & 1) d(x) = iu * scale * psi.data()(x);
    derivs.push_back(std::move(d));
  }
  return derivs;
}

SldResult sld_solve(const DensityMatrix& rho, const Eigen::MatrixXcd& drho,
                    double support_cutoff) {
  const Eigen::MatrixXcd& r = rho.data();
  if (drho.rows() != r.rows() || drho.cols() != r.cols())
    throw std::invalid_argument("derivative dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
  const Eigen::VectorXd lambda = es.eigenvalues();
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::MatrixXcd d_eig = v.adjoint() * drho * v;

  SldResult result;
  Eigen::MatrixXcd l_eig = Eigen::MatrixXcd::Zero(r.rows(), r.cols());
  for (Eigen::Index a = 0; a < r.rows(); ++a) {
    for (Eigen::Index b = 0; b < r.cols(); ++b) {
      const double denom = lambda(a) + lambda(b);
      if (denom >= support_cutoff) {
        l_eig(a, b) = 2.0 * d_eig(a, b) / denom;
      } else if (std::abs(d_eig(a, b)) > 1e-9) {
        result.support_leak = true;
      }
    }
  }
  result.sld = v * l_eig * v.adjoint();
  return result;
}

Eigen::MatrixXd qfi_from_derivatives(
    const PureState& psi, const std::vector<Eigen::VectorXcd>& derivs) {
  const int p = static_cast<int>(derivs.size());
  const Eigen::VectorXcd& amps = psi.data();
  Eigen::MatrixXd q(p, p);
  std::vector<std::complex<double>> overlap(p);
  for (int i = 0; i < p; ++i) {
    if (derivs[i].size() != amps.size())
      throw std::invalid_argument("derivative dimension mismatch");
    overlap[i] = derivs[i].dot(amps);  // <d_i|psi>
  }
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      const std::complex<double> dd = derivs[i].dot(derivs[j]);
      const double value = 4.0 * std::real(dd - overlap[i] * std::conj(overlap[j]));
      q(i, j) = value;
      q(j, i) = value;
    }
  }
  return q;
}

Eigen::MatrixXd qfi_matrix(int n, const std::vector<double>& theta,
                           const std::vector<int>& divisors, QfiMethod method) {
  check_family_args(n, theta, divisors);
  if (method == QfiMethod::Analytic)
    return qfi_from_derivatives(encoded_state(n, theta, divisors),
                                encoded_derivatives(n, theta, divisors));

  const double h = 1e-5;
  std::vector<Eigen::VectorXcd> derivs;
  derivs.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> plus = theta, minus = theta;
    plus[i] += h;
    minus[i] -= h;
    const Eigen::VectorXcd up =
        gauge_fixed(encoded_state(n, plus, divisors).data());
    const Eigen::VectorXcd down =
        gauge_fixed(encoded_state(n, minus, divisors).data());
    derivs.push_back((up - down) / (2.0 * h));
  }
  return qfi_from_derivatives(encoded_state(n, theta, divisors), derivs);
}

Eigen::MatrixXd qfi_matrix_sld(const DensityMatrix& rho,
                               const std::vector<Eigen::MatrixXcd>& drho) {
  const int p = static_cast<int>(drho.size());
  std::vector<Eigen::MatrixXcd> slds;
  slds.reserve(p);
  for (const auto& d : drho) slds.push_back(sld_solve(rho, d).sld);
  Eigen::MatrixXd q(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      const double value = std::real((rho.data() * slds[i] * slds[j]).trace());
      q(i, j) = value;
      q(j, i) = value;
    }
  }
  return q;
}

PrivacyCheck check_privacy_conditions(int n, const std::vector<double>& theta,
                                      const std::vector<int>& divisors,
                                      double tol) {
  const auto derivs = encoded_derivatives(n, theta, divisors);
  PrivacyCheck check;
  for (std::size_t i = 0; i < derivs.size(); ++i)
    for (std::size_t j = i + 1; j < derivs.size(); ++j)
      check.max_derivative_gap =
          std::max(check.max_derivative_gap, (derivs[i] - derivs[j]).norm());
  check.equal_derivatives = check.max_derivative_gap <= tol;

  const Eigen::MatrixXd q =
      qfi_from_derivatives(encoded_state(n, theta, divisors), derivs);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const double top = std::max(ev(ev.size() - 1), 1e-300);
  check.secondary_qfi_fraction =
      ev.size() > 1 ? std::max(ev(ev.size() - 2), 0.0) / top : 0.0;
  check.rank_one = check.secondary_qfi_fraction <= tol;
  return check;
}

Eigen::MatrixXd reparameterization_basis(const std::vector<double>& weights) {
  const int p = static_cast<int>(weights.size());
  if (p < 1) throw std::invalid_argument("empty weight vector");
  Eigen::VectorXd w(p);
  for (int i = 0; i < p; ++i) w(i) = weights[i];
  if (w.norm() < 1e-12) throw std::invalid_argument("weight vector is zero");

  Eigen::MatrixXd basis(p, p);
  basis.col(0) = w / w.norm();
  int cols = 1;
  for (int k = 0; k < p && cols < p; ++k) {
    Eigen::VectorXd candidate = Eigen::VectorXd::Unit(p, k);
    for (int c = 0; c < cols; ++c)
      candidate -= basis.col(c).dot(candidate) * basis.col(c);
    if (candidate.norm() > 1e-8) {
      basis.col(cols) = candidate / candidate.norm();
      ++cols;
    }
  }
  if (cols != p) throw std::logic_error("basis completion failed");
  return basis;
}

double privacy_epsilon(double eps_sv) { return privacy_epsilon_hnorm(eps_sv, 0.5); }

double privacy_epsilon_hnorm(double eps_sv, double h_norm) {
  if (eps_sv < 0.0 || h_norm < 0.0)
    throw std::invalid_argument("negative bound inputs");
  return 4.0 * h_norm * eps_sv;
}

}  // namespace appe
