#include <benchmark/benchmark.h>

#include "bvine/bernstein.hpp"
#include "bvine/families.hpp"
#include "bvine/garch.hpp"
#include "bvine/margin_projection.hpp"
#include "bvine/vine.hpp"
#include "bvine/ase.hpp"

using namespace bvine;

namespace {

BernsteinCopula fitted_bernstein(int m, std::size_t n) {
  auto rng = num::make_rng(7);
  auto s = sample(ParametricPairCopula{FamilyId::Clayton, 2.0, 0.0}, n, rng);
  std::vector<std::vector<double>> cols(2, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    cols[0][i] = s[i][0];
    cols[1][i] = s[i][1];
  }
  auto ps = pseudo_observations(cols);
  return fit_bernstein(ps.cols[0], ps.cols[1], m, nullptr);
}

void BM_BernsteinDensity(benchmark::State& state) {
  const auto b = fitted_bernstein(static_cast<int>(state.range(0)), 2000);
  double u = 0.17;
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.density(u, 0.63));
    u += 1e-6;
  }
}
BENCHMARK(BM_BernsteinDensity)->Arg(8)->Arg(16)->Arg(32);

void BM_BernsteinCdf(benchmark::State& state) {
  const auto b = fitted_bernstein(static_cast<int>(state.range(0)), 2000);
  double u = 0.17;
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.cdf(u, 0.63));
    u += 1e-6;
  }
}
BENCHMARK(BM_BernsteinCdf)->Arg(8)->Arg(16)->Arg(32);

void BM_BernsteinHInverse(benchmark::State& state) {
  const auto b = fitted_bernstein(8, 2000);
  double w = 0.21;
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.h1_inverse(w, 0.4));
    w += 1e-6;
  }
}
BENCHMARK(BM_BernsteinHInverse);

void BM_QpProject(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  auto rng = num::make_rng(11);
  std::vector<double> a(m * m);
  double total = 0.0;
  for (auto& v : a) {
    v = -std::log(num::uniform01(rng));
    total += v;
  }
  for (auto& v : a) v /= total;
  ContingencyTable t;
  t.m = m;
  t.a = a;
  t.row_sums.assign(m, 0.0);
  t.col_sums.assign(m, 0.0);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      t.row_sums[k] += a[k * m + l];
      t.col_sums[l] += a[k * m + l];
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(qp_project(t));
  }
}
BENCHMARK(BM_QpProject)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_StudentTCdf(benchmark::State& state) {
  const ParametricPairCopula c{FamilyId::StudentT, 0.5, 4.0};
  double u = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cdf(c, u, 0.6));
    u += 1e-7;
  }
}
BENCHMARK(BM_StudentTCdf);

void BM_FitStudentT(benchmark::State& state) {
  auto rng = num::make_rng(5);
  auto s = sample(ParametricPairCopula{FamilyId::StudentT, 0.5, 5.0}, 500, rng);
  std::vector<double> u, v;
  for (auto& p : s) {
    u.push_back(p[0]);
    v.push_back(p[1]);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_ml(FamilyId::StudentT, u, v));
  }
}
BENCHMARK(BM_FitStudentT);

void BM_VineSimulate(benchmark::State& state) {
  auto rng = num::make_rng(3);
  const auto model = random_true_vine(static_cast<int>(state.range(0)), VineKind::CVine, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(model, 100, rng));
  }
}
BENCHMARK(BM_VineSimulate)->Arg(3)->Arg(5)->Arg(9);

void BM_GarchFit(benchmark::State& state) {
  GarchModel truth;
  truth.alpha0 = 0.05;
  truth.alpha1 = 0.1;
  truth.beta = 0.85;
  truth.nu = 6.0;
  auto rng = num::make_rng(9);
  const auto r = simulate_garch(truth, 500, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_qml(r));
  }
}
BENCHMARK(BM_GarchFit);

}  // namespace

BENCHMARK_MAIN();
