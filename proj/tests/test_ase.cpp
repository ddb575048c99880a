#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "bvine/ase.hpp"
#include "test_support.hpp"

using namespace bvine;
using Catch::Matchers::WithinAbs;

TEST_CASE("random true vine shape and parameter draws") {
  auto rng = num::make_rng(111);
  const auto m2 = random_true_vine(2, VineKind::CVine, rng);
  REQUIRE(m2.trees.size() == 1);
  REQUIRE(m2.trees[0].size() == 1);

  const auto m5 = random_true_vine(5, VineKind::DVine, rng);
  REQUIRE(m5.edge_count() == 10);
  for (int t = 0; t < 4; ++t) REQUIRE(static_cast<int>(m5.trees[t].size()) == 4 - t);

  SECTION("families appear uniformly") {
    std::map<FamilyId, int> counts;
    for (int i = 0; i < 1000; ++i) {
      const auto m = random_true_vine(2, VineKind::CVine, rng);
      counts[m.edge(0, 0).parametric().family]++;
    }
    REQUIRE(counts.size() == 8);
    for (const auto& [fam, c] : counts) {
      REQUIRE_THAT(c / 1000.0, WithinAbs(0.125, 0.03));
    }
  }
  SECTION("tau magnitudes stay in the configured band") {
    for (int i = 0; i < 200; ++i) {
      const auto m = random_true_vine(2, VineKind::CVine, rng);
      const double tau = kendall_tau(m.edge(0, 0).parametric());
      REQUIRE(std::abs(tau) >= 0.1 - 1e-9);
      REQUIRE(std::abs(tau) <= 0.7 + 1e-9);
    }
  }
  SECTION("tau inversion example") {
    REQUIRE_THAT(theta_from_tau(FamilyId::Clayton, 0.5), WithinAbs(2.0, 1e-12));
  }
}

TEST_CASE("ase of a model against itself is zero") {
  auto rng = num::make_rng(7);
  const auto truth = random_true_vine(4, VineKind::CVine, rng);
  REQUIRE_THAT(ase(truth, truth, 20, 20), WithinAbs(0.0, 1e-18));
}

TEST_CASE("ase treats identical cdfs as identical") {
  VineModel a, b;
  a.structure.kind = b.structure.kind = VineKind::CVine;
  a.structure.order = b.structure.order = {0, 1};
  a.trees = {{PairCopula(ParametricPairCopula{FamilyId::Independence, 0.0, 0.0})}};
  b.trees = {{PairCopula(ParametricPairCopula{FamilyId::Gaussian, 0.0, 0.0})}};
  REQUIRE_THAT(ase(a, b, 20, 20), WithinAbs(0.0, 1e-12));
}

TEST_CASE("ase regression constant: clayton theta=2 against independence") {
  // frozen once from a brute-force quadrature oracle
  VineModel truth, fitted;
  truth.structure.kind = fitted.structure.kind = VineKind::CVine;
  truth.structure.order = fitted.structure.order = {0, 1};
  truth.trees = {{PairCopula(ParametricPairCopula{FamilyId::Clayton, 2.0, 0.0})}};
  fitted.trees = {{PairCopula(ParametricPairCopula{FamilyId::Independence, 0.0, 0.0})}};
  REQUIRE_THAT(ase(truth, fitted, 20, 20), WithinAbs(0.0052995862099466185, 1e-9));
}

TEST_CASE("ase requires matching structures") {
  auto rng = num::make_rng(3);
  const auto a = random_true_vine(3, VineKind::CVine, rng);
  const auto b = random_true_vine(4, VineKind::CVine, rng);
  REQUIRE_THROWS_AS(ase(a, b, 20, 20), std::invalid_argument);
}

TEST_CASE("small study run: accounting, determinism, grouping") {
  StudyConfig cfg;
  cfg.dims = {3};
  cfg.kinds = {VineKind::CVine};
  cfg.sample_sizes = {200};
  cfg.replications = 6;
  cfg.seed = 42;
  cfg.threads = 2;

  const auto res = run_study(cfg);
  REQUIRE(res.summary.size() == 1);
  REQUIRE(res.records.size() == 12);  // 6 reps x 2 arms

  const auto& cell = res.summary[0];
  REQUIRE(cell.dim == 3);
  REQUIRE(cell.replications == 6);
  REQUIRE(cell.bern_instability_pct == 0.0);
  REQUIRE(std::isfinite(cell.bern_mean_ase));
  REQUIRE(cell.bern_mean_ase > 0.0);

  SECTION("summary means cover stable replications only") {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : res.records) {
      if (r.arm == "aic" && !r.unstable) {
        sum += r.ase;
        ++n;
      }
    }
    if (n > 0) {
      REQUIRE_THAT(cell.aic_mean_ase, WithinAbs(sum / n, 1e-12));
    } else {
      REQUIRE(std::isnan(cell.aic_mean_ase));
    }
  }
  SECTION("same config and seed reproduce the summary") {
    StudyConfig cfg1 = cfg;
    cfg1.threads = 1;
    const auto res2 = run_study(cfg1);
    REQUIRE(res2.summary.size() == 1);
    REQUIRE(res2.summary[0].aic_mean_ase == cell.aic_mean_ase);
    REQUIRE(res2.summary[0].bern_mean_ase == cell.bern_mean_ase);
    REQUIRE(res2.summary[0].aic_instability_pct == cell.aic_instability_pct);
  }
}

TEST_CASE("study config validation") {
  StudyConfig cfg;
  cfg.replications = 0;
  REQUIRE_THROWS_AS(run_study(cfg), std::invalid_argument);
  StudyConfig cfg2;
  cfg2.ase_grid = 5;
  REQUIRE_THROWS_AS(run_study(cfg2), std::invalid_argument);
}
