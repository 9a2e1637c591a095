#pragma once

#include <Eigen/Dense>
#include <vector>

#include "appe/states.hpp"

namespace appe {

// Family of network states carrying the phases: each agent multiplies its
// excited component by exp(i theta_i / divisor_i).  With a common divisor m
// the family depends on the parameters only through their mean.
PureState encoded_state(int n, const std::vector<double>& theta,
                        const std::vector<int>& divisors);
PureState encoded_state_uniform(int n, const std::vector<double>& theta,
                                int divisor);

// Exact partial derivatives of the encoded family, one vector per parameter.
std::vector<Eigen::VectorXcd> encoded_derivatives(
    int n, const std::vector<double>& theta, const std::vector<int>& divisors);

struct SldResult {
  Eigen::MatrixXcd sld;
  // Set when the derivative has weight outside the state's support, where the
  // symmetric logarithmic derivative is not defined by the eigenbasis formula.
  bool support_leak = false;
};

// Solves rho L + L rho = 2 drho in the eigenbasis of rho.  Eigenvalue pairs
// summing below the cutoff contribute nothing to L.
SldResult sld_solve(const DensityMatrix& rho, const Eigen::MatrixXcd& drho,
                    double support_cutoff = 1e-12);

enum class QfiMethod { Analytic, FiniteDifference };

// Fisher information matrix of the encoded pure-state family.
Eigen::MatrixXd qfi_matrix(int n, const std::vector<double>& theta,
                           const std::vector<int>& divisors,
                           QfiMethod method = QfiMethod::Analytic);

// Fisher information from a state and its parameter derivatives (pure-state
// projection formula).
Eigen::MatrixXd qfi_from_derivatives(const PureState& psi,
                                     const std::vector<Eigen::VectorXcd>& derivs);

// Mixed-state route via symmetric logarithmic derivatives.
Eigen::MatrixXd qfi_matrix_sld(const DensityMatrix& rho,
                               const std::vector<Eigen::MatrixXcd>& drho);

struct PrivacyCheck {
  double max_derivative_gap = 0.0;     // worst pairwise derivative distance
  double secondary_qfi_fraction = 0.0; // second eigenvalue / largest
  bool equal_derivatives = false;
  bool rank_one = false;
  bool private_family() const { return equal_derivatives && rank_one; }
};

// A family hides the individual parameters exactly when every parameter moves
// the state the same way (so only the mean is observable) and the information
// matrix has a single nonzero direction.
PrivacyCheck check_privacy_conditions(int n, const std::vector<double>& theta,
                                      const std::vector<int>& divisors,
                                      double tol = 1e-8);

// Orthonormal basis whose first column is the normalized weight vector; the
// remaining columns complete it deterministically.  Reparameterizing by this
// basis concentrates a rank-one information matrix in the first coordinate.
Eigen::MatrixXd reparameterization_basis(const std::vector<double>& weights);

// Deviation from perfect privacy after verification: states accepted at
// trace distance eps can shift phase statistics by at most twice that, for
// generators of norm 1/2.
double privacy_epsilon(double eps_sv);
double privacy_epsilon_hnorm(double eps_sv, double h_norm);

}  // namespace appe
