#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace appe {

// Survival function of the chi-square distribution with k dof.
double chi_square_sf(double x, int dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins_used = 0;   // after pooling
  int bins_total = 0;  // before pooling
};

// Two-sample homogeneity test over discrete records.  `counts` maps a record
// to its (sample-1 count, sample-2 count).  Bins whose expected count under
// the pooled null falls below min_expected in either sample are merged into
// one rest bin, largest bins kept first; with fewer than two usable bins the
// test degenerates to p = 1.
ChiSquareResult chi_square_homogeneity(
    const std::map<std::string, std::pair<std::int64_t, std::int64_t>>& counts,
    double min_expected = 5.0);

// Total variation distance between the two empirical distributions in
// `counts` (same layout as chi_square_homogeneity).
double total_variation(
    const std::map<std::string, std::pair<std::int64_t, std::int64_t>>& counts);

// 4-sigma binomial band half-width around p for `trials` draws.
double binomial_band(double p, std::int64_t trials, double sigmas = 4.0);

// Unbiased sample variance (n-1 denominator).
double sample_variance(const std::vector<double>& xs);

double binary_entropy(double p);  // h2, bits; h2(0) = h2(1) = 0

}  // namespace appe
