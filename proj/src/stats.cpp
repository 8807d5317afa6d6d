#include "sgbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgbench {

RankResult rank_with_ties(const std::vector<double>& pooled) {
  if (pooled.empty()) throw std::invalid_argument("nothing to rank");
  for (double v : pooled)
    if (!std::isfinite(v))
      throw std::invalid_argument("non-finite value in ranking input");

  int n = static_cast<int>(pooled.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&pooled](int a, int b) { return pooled[a] < pooled[b]; });

  RankResult result;
  result.ranks.resize(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // positions i..j share the same value; average rank spans them
    double rank = (i + j) / 2.0 + 1.0;
    for (int k = i; k <= j; ++k) result.ranks[order[k]] = rank;
    if (j > i) result.tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }
  return result;
}

namespace {

double tie_sum(const std::vector<int>& tie_sizes) {
  double sum = 0.0;
  for (int t : tie_sizes) sum += static_cast<double>(t) * t * t - t;
  return sum;
}

}  // namespace

TestResult kruskal_wallis(const std::vector<SampleGroup>& groups) {
  if (groups.size() < 2)
    throw std::invalid_argument("omnibus test needs at least two groups");
  std::vector<double> pooled;
  for (const SampleGroup& g : groups) {
    if (g.values.empty())
      throw std::invalid_argument("group '" + g.label + "' is empty");
    pooled.insert(pooled.end(), g.values.begin(), g.values.end());
  }
  double n_total = static_cast<double>(pooled.size());
  if (n_total < 3) throw std::invalid_argument("need at least 3 values");

  RankResult ranked = rank_with_ties(pooled);

  TestResult result;
  result.test_name = "kruskal_wallis";
  result.degrees_of_freedom = static_cast<int>(groups.size()) - 1;

  double h = 0.0;
  std::size_t offset = 0;
  for (const SampleGroup& g : groups) {
    double rank_sum = 0.0;
    for (std::size_t k = 0; k < g.values.size(); ++k)
      rank_sum += ranked.ranks[offset + k];
    offset += g.values.size();
    double mean_rank = rank_sum / g.values.size();
    double dev = mean_rank - (n_total + 1.0) / 2.0;
    h += g.values.size() * dev * dev;
  }
  h *= 12.0 / (n_total * (n_total + 1.0));

  double correction =
      1.0 - tie_sum(ranked.tie_sizes) / (n_total * n_total * n_total - n_total);
  if (correction <= 0.0) {
    // every pooled value identical
    result.statistic = 0.0;
    result.p_value = 1.0;
  } else {
    result.statistic = h / correction;
    result.p_value = chi_square_sf(result.statistic, result.degrees_of_freedom);
  }
  result.significant = result.p_value < result.alpha;
  return result;
}

namespace {

// Exact two-sided p: share of all C(N, n_a) rank assignments whose U lands
// at or beyond the observed value on either side. Tie-free data only, so
// ranks are exactly 1..N.
double exact_mwu_p(int n_a, int n_b, double u_min) {
  int n = n_a + n_b;
  double offset = n_a * (n_a + 1) / 2.0;
  double u_high = static_cast<double>(n_a) * n_b - u_min;

  std::vector<int> pick(n_a);
  std::iota(pick.begin(), pick.end(), 1);
  long long total = 0, extreme = 0;
  for (;;) {
    double u = std::accumulate(pick.begin(), pick.end(), 0.0) - offset;
    ++total;
    if (u <= u_min + 1e-9) ++extreme;
    if (u >= u_high - 1e-9) ++extreme;
    // next combination of {1..n} in lexicographic order
    int i = n_a - 1;
    while (i >= 0 && pick[i] == n - n_a + 1 + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n_a; ++j) pick[j] = pick[j - 1] + 1;
  }
  return std::min(1.0, static_cast<double>(extreme) / total);
}

}  // namespace

TestResult mann_whitney_u(const SampleGroup& a, const SampleGroup& b) {
  if (a.values.empty() || b.values.empty())
    throw std::invalid_argument("both groups need values");

  int n_a = static_cast<int>(a.values.size());
  int n_b = static_cast<int>(b.values.size());
  std::vector<double> pooled = a.values;
  pooled.insert(pooled.end(), b.values.begin(), b.values.end());
  RankResult ranked = rank_with_ties(pooled);

  double rank_sum_a = 0.0;
  for (int k = 0; k < n_a; ++k) rank_sum_a += ranked.ranks[k];
  double u_a = rank_sum_a - n_a * (n_a + 1) / 2.0;
  double u_b = static_cast<double>(n_a) * n_b - u_a;

  TestResult result;
  result.test_name = "mann_whitney_u";
  result.statistic = std::min(u_a, u_b);

  bool has_ties = !ranked.tie_sizes.empty();
  if (n_a <= 8 && n_b <= 8 && !has_ties) {
    result.p_value = exact_mwu_p(n_a, n_b, result.statistic);
  } else {
    double n_total = n_a + n_b;
    double mu = static_cast<double>(n_a) * n_b / 2.0;
    double variance =
        (static_cast<double>(n_a) * n_b / 12.0) *
        ((n_total + 1.0) -
         tie_sum(ranked.tie_sizes) / (n_total * (n_total - 1.0)));
    if (variance <= 0.0) {
      result.p_value = 1.0;  // all pooled values equal
    } else {
      double z = (std::fabs(u_a - mu) - 0.5) / std::sqrt(variance);
      if (z < 0.0) z = 0.0;  // continuity correction crossing the mean
      result.p_value = std::min(1.0, 2.0 * normal_sf(z));
    }
  }
  result.significant = result.p_value < result.alpha;
  return result;
}

std::vector<double> bonferroni(const std::vector<double>& p_values, int m) {
  if (m < static_cast<int>(p_values.size()))
    throw std::invalid_argument("correction count below number of p-values");
  std::vector<double> corrected;
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("p-value outside [0, 1]");
    corrected.push_back(std::min(1.0, m * p));
  }
  return corrected;
}

void apply_bonferroni(std::vector<TestResult>& results, int m) {
  if (m < static_cast<int>(results.size()))
    throw std::invalid_argument("correction count below number of tests");
  for (TestResult& r : results) {
    r.corrected_p = std::min(1.0, m * r.p_value);
    r.significant = *r.corrected_p < r.alpha;
  }
}

// ---- p-value kernels --------------------------------------------------------

namespace {

// Regularized lower incomplete gamma P(a, x) by power series; valid for
// x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction; valid for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi_square_sf(double x, int df) {
  if (df < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
  if (x < 0.0) throw std::invalid_argument("chi-square statistic negative");
  if (x == 0.0) return 1.0;
  double a = df / 2.0;
  double half = x / 2.0;
  if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
  return gamma_q_continued_fraction(a, half);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// ---- Summaries ---------------------------------------------------------------

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("no values for quantile");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  double pos = q * (sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - lo;
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxStats box_stats(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("no values for box stats");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());

  BoxStats box;
  box.q1 = quantile_sorted(sorted, 0.25);
  box.median = quantile_sorted(sorted, 0.5);
  box.q3 = quantile_sorted(sorted, 0.75);
  double iqr = box.q3 - box.q1;
  double fence_low = box.q1 - 1.5 * iqr;
  double fence_high = box.q3 + 1.5 * iqr;

  bool found = false;
  for (double v : sorted) {
    if (v < fence_low || v > fence_high) {
      ++box.outlier_count;
      continue;
    }
    if (!found) box.whisker_low = v;  // first point inside the low fence
    box.whisker_high = v;             // last one seen inside stays
    found = true;
  }
  if (!found) {  // unreachable: the quartile span is always inside the fences
    box.whisker_low = box.q1;
    box.whisker_high = box.q3;
  }
  return box;
}

}  // namespace sgbench
