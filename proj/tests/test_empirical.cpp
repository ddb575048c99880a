#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bvine/empirical.hpp"
#include "bvine/families.hpp"
#include "test_support.hpp"

using namespace bvine;
using Catch::Matchers::WithinAbs;

TEST_CASE("pseudo observations are scaled average ranks") {
  auto s = pseudo_observations({{3.0, 1.0, 2.0}});
  REQUIRE_THAT(s.cols[0][0], WithinAbs(0.75, 1e-15));
  REQUIRE_THAT(s.cols[0][1], WithinAbs(0.25, 1e-15));
  REQUIRE_THAT(s.cols[0][2], WithinAbs(0.50, 1e-15));

  auto inc = pseudo_observations({{-3.0, -1.0, 0.5, 7.0}});
  for (int i = 0; i < 4; ++i) REQUIRE_THAT(inc.cols[0][i], WithinAbs(0.2 * (i + 1), 1e-15));

  auto tied = pseudo_observations({{1.0, 1.0}});
  REQUIRE_THAT(tied.cols[0][0], WithinAbs(0.5, 1e-15));
  REQUIRE_THAT(tied.cols[0][1], WithinAbs(0.5, 1e-15));
}

TEST_CASE("pseudo observations are invariant under monotone transforms") {
  auto rng = num::make_rng(5);
  std::vector<double> x(200);
  for (auto& v : x) v = num::uniform01(rng) * 10.0 - 5.0;
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(0.7 * x[i]) + 3.0;
  auto a = pseudo_observations({x});
  auto b = pseudo_observations({y});
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(a.cols[0][i] == b.cols[0][i]);
  }
}

TEST_CASE("empirical copula cdf") {
  std::vector<double> u = {0.25, 0.75}, v = {0.25, 0.75};
  REQUIRE_THAT(empirical_copula_cdf(u, v, 0.5, 0.5), WithinAbs(0.5, 1e-15));
  REQUIRE_THAT(empirical_copula_cdf(u, v, 1.0, 1.0), WithinAbs(1.0, 1e-15));
  REQUIRE(empirical_copula_cdf(u, v, 0.0, 0.9) == 0.0);

  // monotone and within Frechet bounds up to 1/n
  auto rng = num::make_rng(11);
  auto s = sample(ParametricPairCopula{FamilyId::Gumbel, 1.7, 0.0}, 300, rng);
  std::vector<double> su, sv;
  for (auto& p : s) {
    su.push_back(p[0]);
    sv.push_back(p[1]);
  }
  const double slack = 1.0 / 300.0 + 1e-12;
  double prev = -1.0;
  for (double x = 0.05; x <= 0.95; x += 0.05) {
    const double c = empirical_copula_cdf(su, sv, x, 0.6);
    REQUIRE(c >= prev);
    prev = c;
    REQUIRE(c <= std::min(x, 0.6) + slack);
    REQUIRE(c >= std::max(x + 0.6 - 1.0, 0.0) - slack);
  }
}

TEST_CASE("kendall tau basic values") {
  std::vector<double> inc = {1, 2, 3, 4, 5}, dec = {5, 4, 3, 2, 1};
  REQUIRE_THAT(kendall_tau(inc, inc), WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(kendall_tau(inc, dec), WithinAbs(-1.0, 1e-15));
  std::vector<double> flat = {1, 1, 1, 1, 1};
  REQUIRE_THROWS_AS(kendall_tau(inc, flat), std::invalid_argument);
}

TEST_CASE("kendall tau matches closed form for clayton") {
  auto rng = num::make_rng(99);
  auto s = sample(ParametricPairCopula{FamilyId::Clayton, 2.0, 0.0}, 2000, rng);
  std::vector<double> u, v;
  for (auto& p : s) {
    u.push_back(p[0]);
    v.push_back(p[1]);
  }
  REQUIRE_THAT(kendall_tau(u, v), WithinAbs(0.5, 0.05));
}

TEST_CASE("fast kendall tau agrees with quadratic reference, including ties") {
  auto rng = num::make_rng(4242);
  std::vector<double> x(400), y(400);
  for (std::size_t i = 0; i < x.size(); ++i) {
    // coarse rounding produces plenty of ties
    x[i] = std::round(num::uniform01(rng) * 20.0);
    y[i] = std::round(x[i] * 0.4 + num::uniform01(rng) * 10.0);
  }
  REQUIRE_THAT(kendall_tau(x, y), WithinAbs(testsup::kendall_tau_reference(x, y), 1e-12));
}

TEST_CASE("contingency table binning") {
  SECTION("single observation lands in its cell") {
    auto t = bin_to_table({0.1}, {0.9}, 2);
    REQUIRE(t.at(0, 1) == 1.0);
    REQUIRE(t.at(0, 0) == 0.0);
    REQUIRE(t.at(1, 0) == 0.0);
    REQUIRE(t.at(1, 1) == 0.0);
  }
  SECTION("cell centers of a 2x2 grid") {
    std::vector<double> u = {0.25, 0.25, 0.75, 0.75}, v = {0.25, 0.75, 0.25, 0.75};
    auto t = bin_to_table(u, v, 2);
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) REQUIRE_THAT(t.at(k, l), WithinAbs(0.25, 1e-15));
    }
  }
  SECTION("exact rank grids give uniform row sums") {
    const int m = 4, reps = 3;
    const int n = m * m * reps;
    std::vector<double> u, v;
    for (int r = 0; r < reps; ++r) {
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          u.push_back((a + (b + r * m) / static_cast<double>(m * reps) + 0.5 / (m * reps)) / m);
          v.push_back((b + (a + r * m) / static_cast<double>(m * reps) + 0.5 / (m * reps)) / m);
        }
      }
    }
    auto t = bin_to_table(u, v, m);
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      REQUIRE_THAT(t.row_sums[k], WithinAbs(1.0 / m, 1e-12));
      REQUIRE_THAT(t.col_sums[k], WithinAbs(1.0 / m, 1e-12));
      for (int l = 0; l < m; ++l) total += t.at(k, l);
    }
    REQUIRE_THAT(total, WithinAbs(1.0, 1e-12));
    REQUIRE(n == static_cast<int>(u.size()));
  }
  SECTION("row and column sums are the univariate bin frequencies") {
    auto rng = num::make_rng(3);
    std::vector<double> u(500), v(500);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = num::uniform01(rng);
      v[i] = num::uniform01(rng);
    }
    const int m = 5;
    auto t = bin_to_table(u, v, m);
    for (int k = 0; k < m; ++k) {
      int cu = 0, cv = 0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] > k / 5.0 && u[i] <= (k + 1) / 5.0) ++cu;
        if (v[i] > k / 5.0 && v[i] <= (k + 1) / 5.0) ++cv;
      }
      REQUIRE_THAT(t.row_sums[k], WithinAbs(cu / 500.0, 1e-12));
      REQUIRE_THAT(t.col_sums[k], WithinAbs(cv / 500.0, 1e-12));
    }
  }
  REQUIRE_THROWS_AS(bin_to_table({0.5}, {0.5}, 1), std::invalid_argument);
}
