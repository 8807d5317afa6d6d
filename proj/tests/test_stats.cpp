#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sgbench/rng.hpp"
#include "sgbench/stats.hpp"

using namespace sgbench;

namespace {

SampleGroup group(const std::string& label, std::vector<double> v) {
  return {label, std::move(v)};
}

// Normal-approximation p computed independently of the library: tie-free
// variance, continuity correction, two-sided.
double normal_p_from_u(double u_min, int na, int nb) {
  double mu = na * static_cast<double>(nb) / 2.0;
  double sigma = std::sqrt(na * static_cast<double>(nb) * (na + nb + 1) / 12.0);
  double z = (std::abs(u_min - mu) - 0.5) / sigma;
  if (z < 0.0) z = 0.0;
  return std::min(1.0, 2.0 * normal_sf(z));
}

}  // namespace

TEST_CASE("kruskal-wallis on the two-value groups matches the hand result") {
  auto r = kruskal_wallis(
      {group("a", {1, 2}), group("b", {3, 4}), group("c", {5, 6})});
  CHECK(r.statistic == doctest::Approx(32.0 / 7.0).epsilon(1e-12));
  CHECK(r.degrees_of_freedom == 2);
  CHECK(r.p_value == doctest::Approx(std::exp(-16.0 / 7.0)).epsilon(1e-12));
  CHECK_FALSE(r.significant);
}

TEST_CASE("kruskal-wallis on exchangeable groups is near zero") {
  auto r = kruskal_wallis({group("a", {1, 2, 3}), group("b", {1, 2, 3}),
                           group("c", {1, 2, 3})});
  CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.p_value > 0.9);
}

TEST_CASE("kruskal-wallis degenerates gracefully when all values tie") {
  auto r = kruskal_wallis({group("a", {5, 5}), group("b", {5, 5})});
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("mann-whitney fully separated groups get the exact enumeration p") {
  auto r = mann_whitney_u(group("a", {1, 2, 3}), group("b", {4, 5, 6}));
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-12));  // 2/20
  CHECK_FALSE(r.significant);
}

TEST_CASE("mann-whitney on identical groups is symmetric and insignificant") {
  std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto r = mann_whitney_u(group("a", v), group("b", v));
  CHECK(r.statistic == doctest::Approx(50.0));  // n*n/2
  CHECK(r.p_value > 0.95);
}

TEST_CASE("mann-whitney statistic is min(U_a, U_b) and order-symmetric") {
  Rng rng(31);
  std::vector<double> a(6), b(9);
  for (double& v : a) v = rng.normal();
  for (double& v : b) v = rng.normal() + 0.5;

  // direct U_a computation
  double ua = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x > y)
        ua += 1.0;
      else if (x == y)
        ua += 0.5;
    }
  double ub = a.size() * b.size() - ua;
  auto r = mann_whitney_u(group("a", a), group("b", b));
  CHECK(r.statistic == doctest::Approx(std::min(ua, ub)).epsilon(1e-12));
  auto rr = mann_whitney_u(group("b", b), group("a", a));
  CHECK(rr.statistic == doctest::Approx(r.statistic).epsilon(1e-12));
  CHECK(rr.p_value == doctest::Approx(r.p_value).epsilon(1e-12));
}

TEST_CASE("rank statistics are invariant under monotone transforms") {
  Rng rng(7);
  std::vector<double> a(12), b(15), c(9);
  for (double& v : a) v = rng.normal();
  for (double& v : b) v = rng.normal() + 0.3;
  for (double& v : c) v = rng.normal() - 0.2;

  auto kw1 = kruskal_wallis({group("a", a), group("b", b), group("c", c)});
  auto mw1 = mann_whitney_u(group("a", a), group("b", b));

  auto expv = [](std::vector<double> v) {
    for (double& x : v) x = std::exp(x);
    return v;
  };
  auto kw2 = kruskal_wallis(
      {group("a", expv(a)), group("b", expv(b)), group("c", expv(c))});
  auto mw2 = mann_whitney_u(group("a", expv(a)), group("b", expv(b)));
  CHECK(kw2.statistic == doctest::Approx(kw1.statistic).epsilon(1e-12));
  CHECK(mw2.statistic == doctest::Approx(mw1.statistic).epsilon(1e-12));
  CHECK(mw2.p_value == doctest::Approx(mw1.p_value).epsilon(1e-12));
}

TEST_CASE("two-group kruskal-wallis equals the squared mann-whitney z") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a(10 + rep), b(14);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal() + 0.4;

    auto kw = kruskal_wallis({group("a", a), group("b", b)});
    auto mw = mann_whitney_u(group("a", a), group("b", b));

    // z without continuity correction, tie-free variance
    int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    double mu = na * static_cast<double>(nb) / 2.0;
    double sigma =
        std::sqrt(na * static_cast<double>(nb) * (na + nb + 1) / 12.0);
    double z = (mw.statistic - mu) / sigma;
    CHECK(kw.statistic == doctest::Approx(z * z).epsilon(1e-9));
  }
}

TEST_CASE("exact enumeration agrees with the normal approximation") {
  Rng rng(99);
  for (int rep = 0; rep < 40; ++rep) {
    int n = 4 + rep % 5;  // 4..8 per group, exact path applies
    std::vector<double> a(n), b(n);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal() + 0.6;
    auto r = mann_whitney_u(group("a", a), group("b", b));
    double approx = normal_p_from_u(r.statistic, n, n);
    CHECK(std::abs(r.p_value - approx) <= 0.02);
  }
}

TEST_CASE("u statistics of both orientations sum to the pair count") {
  Rng rng(55);
  std::vector<double> a(7), b(11);
  for (double& v : a) v = rng.normal();
  for (double& v : b) v = rng.normal();
  double ua = 0.0;
  for (double x : a)
    for (double y : b) ua += (x > y) ? 1.0 : (x == y ? 0.5 : 0.0);
  double ub = 0.0;
  for (double y : b)
    for (double x : a) ub += (y > x) ? 1.0 : (x == y ? 0.5 : 0.0);
  CHECK(ua + ub == doctest::Approx(77.0));
  auto r = mann_whitney_u(group("a", a), group("b", b));
  CHECK(r.statistic <= 77.0 / 2.0);
}

TEST_CASE("bonferroni scales and caps p-values") {
  auto c = bonferroni({0.03, 0.7}, 2);
  CHECK(c[0] == doctest::Approx(0.06));
  CHECK(c[1] == doctest::Approx(1.0));

  std::vector<TestResult> results(2);
  results[0].p_value = 0.01;
  results[1].p_value = 0.04;
  apply_bonferroni(results, 2);
  REQUIRE(results[0].corrected_p.has_value());
  CHECK(*results[0].corrected_p == doctest::Approx(0.02));
  CHECK(results[0].significant);
  CHECK(*results[1].corrected_p == doctest::Approx(0.08));
  CHECK_FALSE(results[1].significant);
}

TEST_CASE("chi-square survival function hits the textbook quantile") {
  CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_sf(0.0, 2) == doctest::Approx(1.0));
  CHECK(chi_square_sf(4.0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("normal survival function is symmetric and calibrated") {
  CHECK(normal_sf(0.0) == doctest::Approx(0.5));
  CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-9));
  CHECK(normal_sf(-1.0) + normal_sf(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank_with_ties uses average ranks") {
  RankResult r = rank_with_ties({10.0, 20.0, 20.0, 30.0});
  CHECK(r.ranks == std::vector<double>{1.0, 2.5, 2.5, 4.0});
  REQUIRE(r.tie_sizes.size() == 1);
  CHECK(r.tie_sizes[0] == 2);
}

TEST_CASE("quantile interpolation and box stats match hand values") {
  std::vector<double> sorted = {1, 2, 3, 4, 100};
  CHECK(quantile_sorted(sorted, 0.5) == doctest::Approx(3.0));
  CHECK(quantile_sorted(sorted, 0.25) == doctest::Approx(2.0));
  CHECK(quantile_sorted(sorted, 0.0) == doctest::Approx(1.0));
  CHECK(quantile_sorted(sorted, 1.0) == doctest::Approx(100.0));

  BoxStats b = box_stats({4, 1, 100, 2, 3});  // unsorted input
  CHECK(b.median == doctest::Approx(3.0));
  CHECK(b.q1 == doctest::Approx(2.0));
  CHECK(b.q3 == doctest::Approx(4.0));
  CHECK(b.whisker_low == doctest::Approx(1.0));
  CHECK(b.whisker_high == doctest::Approx(4.0));  // 100 is past the fence
  CHECK(b.outlier_count == 1);
}
