#include "appe/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "appe/stats.hpp"

namespace appe {

double theta_from_beta(double beta, bool* clamped) {
  bool clip = false;
  if (beta < 0.0) {
    beta = 0.0;
    clip = true;
  } else if (beta > 1.0) {
    beta = 1.0;
    clip = true;
  }
  if (clamped) *clamped = clip;
  return std::acos(2.0 * beta - 1.0);
}

double perturbed_beta(double beta, double alpha) {
  if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta outside [0,1]");
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
  return beta + alpha - 2.0 * alpha * beta;
}

double alpha_from_eta(double eta, double theta) {
  const double c = std::cos(theta);
  if (std::abs(c) < 1e-300) throw std::domain_error("cos(theta) vanishes");
  return std::abs(std::sin(theta + 0.5 * eta) * std::sin(0.5 * eta) / c);
}

double f_poly(double eta, double theta) {
  const double t3 = theta * theta * theta;
  const double t5 = t3 * theta * theta;
  return 0.5 * std::abs(theta + t3 / 3.0 + 2.0 * t5 / 15.0) * std::abs(0.5 * eta);
}

double lemma_tail_bound(double omega, int length, int ones) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  if (ones < 0 || ones > length) throw std::invalid_argument("ones outside [0, L]");
  const double l = length, k = ones;
  return std::exp(-2.0 * omega * omega * (l - k) * k * k / (l * (k + 1.0)));
}

double bias_bound(double eta, double theta, double delta, int length, int ones) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  if (ones < 0 || ones > length) throw std::invalid_argument("ones outside [0, L]");
  const double f = f_poly(eta, theta);
  if (f <= delta) return 1.0;
  const double k = ones;
  const double nu = length - ones;
  const double gap = f - delta;
  return std::exp(-2.0 * gap * gap * nu * k * k / ((k + nu) * (k + 1.0)));
}

double correct_beta(double beta_prime, double delta, bool* clamped) {
  if (delta >= 0.5 - 1e-9)
    throw std::domain_error("flip rate too close to 1/2 to invert");
  if (delta < 0.0) throw std::invalid_argument("delta cannot be negative");
  double beta = (beta_prime - delta) / (1.0 - 2.0 * delta);
  bool clip = false;
  if (beta < 0.0) {
    beta = 0.0;
    clip = true;
  } else if (beta > 1.0) {
    beta = 1.0;
    clip = true;
  }
  if (clamped) *clamped = clip;
  return beta;
}

VarianceCheck variance_check(const std::vector<double>& theta_samples,
                             std::int64_t nu) {
  if (nu < 1) throw std::invalid_argument("nu must be >= 1");
  VarianceCheck out;
  out.empirical = sample_variance(theta_samples);
  out.predicted = 1.0 / static_cast<double>(nu);
  return out;
}

}  // namespace appe
