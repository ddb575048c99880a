#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bvine/numerics.hpp"
#include "test_support.hpp"

using namespace bvine;
using Catch::Matchers::WithinAbs;

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {1e-10, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-8}) {
    REQUIRE_THAT(num::norm_cdf(num::norm_quantile(p)), WithinAbs(p, 1e-14));
  }
  REQUIRE(num::norm_quantile(0.5) == 0.0);
}

TEST_CASE("incomplete beta symmetry and endpoints") {
  REQUIRE(num::inc_beta(2.0, 3.0, 0.0) == 0.0);
  REQUIRE(num::inc_beta(2.0, 3.0, 1.0) == 1.0);
  for (double x : {0.05, 0.3, 0.6, 0.95}) {
    for (auto [a, b] : {std::pair{1.5, 0.5}, {4.0, 4.0}, {0.25, 2.0}}) {
      REQUIRE_THAT(num::inc_beta(a, b, x), WithinAbs(1.0 - num::inc_beta(b, a, 1.0 - x), 1e-13));
    }
  }
}

TEST_CASE("student t cdf/quantile round trip") {
  for (double nu : {2.5, 4.0, 7.3, 12.0, 30.0}) {
    for (double p = 0.01; p < 1.0; p += 0.049) {
      REQUIRE_THAT(num::t_cdf(num::t_quantile(p, nu), nu), WithinAbs(p, 1e-9));
    }
    // far tails
    for (double p : {1e-9, 1e-6, 1.0 - 1e-6}) {
      REQUIRE_THAT(num::t_cdf(num::t_quantile(p, nu), nu), WithinAbs(p, 1e-12 + p * 1e-6));
    }
    REQUIRE(num::t_quantile(0.5, nu) == 0.0);
    REQUIRE_THAT(num::t_quantile(0.25, nu), WithinAbs(-num::t_quantile(0.75, nu), 1e-12));
  }
}

TEST_CASE("t pdf matches derivative of cdf") {
  for (double nu : {3.0, 8.5}) {
    for (double x : {-2.0, -0.3, 0.0, 1.7}) {
      const double fd = testsup::central_diff([&](double z) { return num::t_cdf(z, nu); }, x, 1e-4);
      REQUIRE_THAT(num::t_pdf(x, nu), WithinAbs(fd, 1e-6));
    }
  }
}

TEST_CASE("standardized t has unit variance") {
  for (double nu : {3.0, 6.0, 25.0}) {
    // z = tan(t) substitution handles the heavy tails
    auto f = [&](double t) {
      const double z = std::tan(t), sec2 = 1.0 + z * z;
      return z * z * num::std_t_pdf(z, nu) * sec2;
    };
    const double v = num::integrate(f, -M_PI / 2 + 1e-12, M_PI / 2 - 1e-12, 1e-11);
    REQUIRE_THAT(v, WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(num::std_t_cdf(num::std_t_quantile(0.31, nu), nu), WithinAbs(0.31, 1e-10));
  }
}

TEST_CASE("bivariate normal cdf against reference values") {
  // reference values from an independent implementation
  REQUIRE_THAT(num::bvn_cdf(0.5, -0.3, 0.7), WithinAbs(0.356783634796855, 5e-13));
  REQUIRE_THAT(num::bvn_cdf(1.2, 1.2, 0.99), WithinAbs(0.873978596455676, 5e-13));
  REQUIRE_THAT(num::bvn_cdf(-0.4, 2.0, -0.95), WithinAbs(0.321828128809001, 5e-13));
}

TEST_CASE("bivariate normal special cases") {
  for (double r : {-0.8, -0.2, 0.0, 0.35, 0.95}) {
    REQUIRE_THAT(num::bvn_cdf(0.0, 0.0, r), WithinAbs(0.25 + std::asin(r) / (2.0 * M_PI), 1e-13));
  }
  REQUIRE_THAT(num::bvn_cdf(0.7, -1.1, 0.0),
               WithinAbs(num::norm_cdf(0.7) * num::norm_cdf(-1.1), 1e-14));
  // degenerate correlations
  REQUIRE_THAT(num::bvn_cdf(0.4, 1.0, 1.0), WithinAbs(num::norm_cdf(0.4), 1e-14));
  REQUIRE_THAT(num::bvn_cdf(0.4, -0.4, -1.0),
               WithinAbs(std::max(0.0, num::norm_cdf(0.4) + num::norm_cdf(-0.4) - 1.0), 1e-14));
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  for (int n : {4, 16, 64}) {
    const auto& [xs, ws] = num::gauss_legendre(n);
    double total = 0.0, x2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      total += ws[i];
      x2 += ws[i] * xs[i] * xs[i];
    }
    REQUIRE_THAT(total, WithinAbs(2.0, 1e-13));
    REQUIRE_THAT(x2, WithinAbs(2.0 / 3.0, 1e-13));
  }
}

TEST_CASE("adaptive integration reaches requested accuracy") {
  const double v = num::integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  REQUIRE_THAT(v, WithinAbs(2.0, 1e-11));
  const double w = num::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10);
  REQUIRE_THAT(w, WithinAbs(2.0 / 3.0, 1e-8));
}

TEST_CASE("rng substreams are reproducible and order independent") {
  auto a = num::substream(42, {1, 2, 3});
  auto b = num::substream(42, {1, 2, 3});
  REQUIRE(a() == b());
  auto c = num::substream(42, {1, 2, 4});
  auto d = num::substream(43, {1, 2, 3});
  REQUIRE(a() != c());
  REQUIRE(b() != d());
  auto e = num::substream(7, {0});
  for (int i = 0; i < 10000; ++i) {
    const double u = num::uniform01(e);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}
