#include "appe/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace appe {

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_sf: dof < 1");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square_homogeneity(
    const std::map<std::string, std::pair<std::int64_t, std::int64_t>>& counts,
    double min_expected) {
  ChiSquareResult result;
  result.bins_total = static_cast<int>(counts.size());

  double n1 = 0.0, n2 = 0.0;
  for (const auto& [key, c] : counts) {
    n1 += static_cast<double>(c.first);
    n2 += static_cast<double>(c.second);
  }
  const double total = n1 + n2;
  if (total <= 0.0 || n1 <= 0.0 || n2 <= 0.0) return result;

  // Deterministic pooling: sort by combined count (key as tie-break), keep
  // bins meeting the expected-count floor, merge the tail into a rest bin.
  std::vector<std::pair<std::string, std::pair<std::int64_t, std::int64_t>>> bins(
      counts.begin(), counts.end());
  std::sort(bins.begin(), bins.end(), [](const auto& a, const auto& b) {
    const auto ta = a.second.first + a.second.second;
    const auto tb = b.second.first + b.second.second;
    if (ta != tb) return ta > tb;
    return a.first < b.first;
  });

  const double frac1 = n1 / total, frac2 = n2 / total;
  std::vector<std::pair<double, double>> kept;
  double rest1 = 0.0, rest2 = 0.0;
  for (const auto& [key, c] : bins) {
    const double combined = static_cast<double>(c.first + c.second);
    if (combined * frac1 >= min_expected && combined * frac2 >= min_expected) {
      kept.emplace_back(static_cast<double>(c.first), static_cast<double>(c.second));
    } else {
      rest1 += static_cast<double>(c.first);
      rest2 += static_cast<double>(c.second);
    }
  }
  const double rest_combined = rest1 + rest2;
  if (rest_combined > 0.0 &&
      rest_combined * frac1 >= min_expected && rest_combined * frac2 >= min_expected) {
    kept.emplace_back(rest1, rest2);
  } else if (rest_combined > 0.0 && !kept.empty()) {
    kept.back().first += rest1;
    kept.back().second += rest2;
  }

  result.bins_used = static_cast<int>(kept.size());
  if (kept.size() < 2) return result;

  double stat = 0.0;
  for (const auto& [o1, o2] : kept) {
    const double combined = o1 + o2;
    const double e1 = combined * frac1, e2 = combined * frac2;
    stat += (o1 - e1) * (o1 - e1) / e1 + (o2 - e2) * (o2 - e2) / e2;
  }
  result.statistic = stat;
  result.dof = static_cast<int>(kept.size()) - 1;
  result.p_value = chi_square_sf(stat, result.dof);
  return result;
}

double total_variation(
    const std::map<std::string, std::pair<std::int64_t, std::int64_t>>& counts) {
  double n1 = 0.0, n2 = 0.0;
  for (const auto& [key, c] : counts) {
    n1 += static_cast<double>(c.first);
    n2 += static_cast<double>(c.second);
  }
  if (n1 <= 0.0 || n2 <= 0.0) return 0.0;
  double tv = 0.0;
  for (const auto& [key, c] : counts)
    tv += std::abs(static_cast<double>(c.first) / n1 -
                   static_cast<double>(c.second) / n2);
  return 0.5 * tv;
}

double binomial_band(double p, std::int64_t trials, double sigmas) {
  if (trials <= 0) throw std::invalid_argument("binomial_band: trials <= 0");
  return sigmas * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_variance: need >= 2 samples");
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
                      static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace appe
