#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace appe {

// Mean-phase point estimate from the even-parity fraction:
// theta = arccos(2 beta - 1), principal branch [0, pi].  beta outside [0, 1]
// is clamped; *clamped reports it when non-null.
double theta_from_beta(double beta, bool* clamped = nullptr);

// Even-parity fraction after independent flips with probability alpha:
// beta' = beta + alpha - 2 alpha beta.
double perturbed_beta(double beta, double alpha);

// Magnitude of the estimate displacement a phase offset eta induces:
// |sin(theta + eta/2) sin(eta/2) / cos(theta)|.
double alpha_from_eta(double eta, double theta);

// Polynomial displacement envelope
// (1/2) |theta + theta^3/3 + 2 theta^5/15| |eta/2|.
double f_poly(double eta, double theta);

// Tail bound for a random k-subset audit over L positions:
// exp(-2 omega^2 (L-k) k^2 / (L (k+1))).
double lemma_tail_bound(double omega, int length, int ones);

// Probability bound on an undetected bias of at least eta in the estimate,
// given observed verification failure rate delta:
// exp(-2 (f(eta,theta) - delta)^2 nu k^2 / ((k+nu)(k+1))), nu = L - k.
// Returns 1 when f(eta, theta) <= delta.
double bias_bound(double eta, double theta, double delta, int length, int ones);

// Inverts the flip perturbation: beta = (beta' - delta) / (1 - 2 delta),
// clamped to [0, 1] (flag via *clamped).  Throws std::domain_error when
// delta >= 1/2 - 1e-9.
double correct_beta(double beta_prime, double delta, bool* clamped = nullptr);

struct VarianceCheck {
  double empirical = 0.0;
  double predicted = 0.0;  // 1 / nu
};

// Unbiased sample variance of theta estimates against the 1/nu prediction.
VarianceCheck variance_check(const std::vector<double>& theta_samples,
                             std::int64_t nu);

// Protocol-level estimate summary produced by a full run.
struct EstimationReport {
  int n = 0;
  int m_true = 0;
  int m_tally = -1;  // -1 when the vote never completed
  int length_configured = 0;
  int ones_configured = 0;
  int nu_executed = 0;
  int k_executed = 0;
  int sv_rejected = 0;
  double beta_hat = 0.0;   // fraction of estimation rounds with chi == 0
  double delta_hat = 0.0;  // fraction of verification rounds with gamma == 1
  double theta_hat = 0.0;
  bool beta_clamped = false;
  std::optional<double> theta_corrected;
  bool correction_failed = false;
  double variance_pred = 0.0;
  double eps_sv = 0.0;
  double eps_priv = 0.0;
  std::vector<std::pair<double, double>> bias_curve;  // (eta, bound)
  std::string abort_reason;  // empty when the run completed
};

}  // namespace appe
