#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sgbench {

struct SampleGroup {
  std::string label;
  std::vector<double> values;  // finite, nonempty
};

struct TestResult {
  std::string test_name;
  double statistic = 0.0;
  int degrees_of_freedom = 0;         // omnibus only
  double p_value = 1.0;
  std::optional<double> corrected_p;  // pairwise tests, after correction
  double alpha = 0.05;
  bool significant = false;           // on corrected_p when present, else p
};

struct BoxStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  int outlier_count = 0;
};

struct RankResult {
  std::vector<double> ranks;   // 1-based, average-rank method for ties
  std::vector<int> tie_sizes;  // sizes of tie groups with >= 2 members
};

RankResult rank_with_ties(const std::vector<double>& pooled);

// Omnibus H test with tie correction; p from the chi-square upper tail at
// k - 1 degrees of freedom. All-identical data degenerates to H = 0, p = 1.
TestResult kruskal_wallis(const std::vector<SampleGroup>& groups);

// Two-sided U test; statistic is min(U_a, U_b). Exact enumeration when both
// groups have <= 8 values and the pooled data is tie-free, otherwise normal
// approximation with tie-corrected variance and continuity correction.
TestResult mann_whitney_u(const SampleGroup& a, const SampleGroup& b);

// min(1, m * p) per value; m may exceed the list length (pre-declared
// comparison count).
std::vector<double> bonferroni(const std::vector<double>& p_values, int m);

// Fill corrected_p = min(1, m * p) on each result and recompute
// significance against it.
void apply_bonferroni(std::vector<TestResult>& results, int m);

// Upper-tail survival functions. chi_square_sf evaluates the regularized
// upper incomplete gamma Q(df/2, x/2) by series or continued fraction.
double chi_square_sf(double x, int df);
double normal_sf(double z);

// Linear interpolation at position q * (n - 1) over ascending values.
double quantile_sorted(const std::vector<double>& sorted, double q);

// Quartiles by linear interpolation plus Tukey 1.5 IQR whiskers clamped to
// the nearest data point inside each fence.
BoxStats box_stats(const std::vector<double>& values);

}  // namespace sgbench
