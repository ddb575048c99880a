#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bvine/risk.hpp"
#include "test_support.hpp"

using namespace bvine;
using Catch::Matchers::WithinAbs;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

/// small synthetic panel: d series of t-GARCH returns
ReturnPanel synthetic_panel(std::size_t T, std::size_t d, std::uint64_t seed) {
  ReturnPanel p;
  for (std::size_t j = 0; j < d; ++j) p.assets.push_back("A" + std::to_string(j + 1));
  p.r.resize(T, std::vector<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    GarchModel g;
    g.mu = 0.0002;
    g.alpha0 = 2e-6;
    g.alpha1 = 0.08;
    g.beta = 0.9;
    g.nu = 7.0;
    auto rng = num::substream(seed, {j});
    const auto r = simulate_garch(g, T, rng);
    for (std::size_t t = 0; t < T; ++t) p.r[t][j] = r[t];
  }
  for (std::size_t t = 0; t < T; ++t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zu-01-01", 1000 + t);  // increasing pseudo-dates
    p.dates.push_back(buf);
  }
  return p;
}

}  // namespace

TEST_CASE("ingest computes log returns from prices") {
  const auto path = write_temp("bvine_panel1.csv", "date,X\n2020-01-01,100\n2020-01-02,110\n");
  ScreeningReport rep;
  const auto p = ingest(path, PanelInput::Prices, &rep);
  REQUIRE(p.days() == 1);
  REQUIRE_THAT(p.r[0][0], WithinAbs(std::log(1.1), 1e-15));
  REQUIRE(rep.flags.empty());
  std::filesystem::remove(path);
}

TEST_CASE("ingest: constant prices give zero returns") {
  const auto path = write_temp("bvine_panel2.csv",
                               "date,X,Y\n2020-01-01,50,20\n2020-01-02,50,20\n2020-01-03,50,20\n");
  const auto p = ingest(path, PanelInput::Prices, nullptr);
  for (const auto& row : p.r) {
    for (double v : row) REQUIRE(v == 0.0);
  }
  std::filesystem::remove(path);
}

TEST_CASE("ingest screening flags") {
  SECTION("extreme reversed returns are flagged as a pair") {
    const auto path = write_temp("bvine_panel3.csv",
                                 "date,X\n2020-01-01,10\n2020-01-02,250\n2020-01-03,10\n");
    ScreeningReport rep;
    ingest(path, PanelInput::Prices, &rep);
    int reversal_flags = 0;
    for (const auto& f : rep.flags) {
      if (f.kind == "extreme-return-reversal") ++reversal_flags;
    }
    REQUIRE(reversal_flags == 2);  // the jump and its reversal
    std::filesystem::remove(path);
  }
  SECTION("sub-dollar prices are flagged but kept") {
    const auto path = write_temp("bvine_panel4.csv",
                                 "date,X\n2020-01-01,0.5\n2020-01-02,0.6\n2020-01-03,0.7\n");
    ScreeningReport rep;
    const auto p = ingest(path, PanelInput::Prices, &rep);
    REQUIRE(p.days() == 2);
    int sub = 0;
    for (const auto& f : rep.flags) {
      if (f.kind == "sub-dollar-price") ++sub;
    }
    REQUIRE(sub == 3);
    std::filesystem::remove(path);
  }
  SECTION("a 160% jump is not extreme") {
    const auto path =
        write_temp("bvine_panel5.csv", "date,X\n2020-01-01,10\n2020-01-02,50\n2020-01-03,10\n");
    ScreeningReport rep;
    ingest(path, PanelInput::Prices, &rep);
    for (const auto& f : rep.flags) REQUIRE(f.kind != "extreme-return-reversal");
    std::filesystem::remove(path);
  }
}

TEST_CASE("ingest input validation") {
  const auto bad1 = write_temp("bvine_bad1.csv", "date,X\n2020-01-02,1\n2020-01-01,2\n");
  REQUIRE_THROWS(ingest(bad1, PanelInput::Prices, nullptr));
  const auto bad2 = write_temp("bvine_bad2.csv", "date,X\n2020-01-01,1\n2020-01-02,oops\n");
  REQUIRE_THROWS(ingest(bad2, PanelInput::Prices, nullptr));
  const auto bad3 = write_temp("bvine_bad3.csv", "date,X\n2020-01-01,1,9\n");
  REQUIRE_THROWS(ingest(bad3, PanelInput::Prices, nullptr));
  REQUIRE_THROWS(ingest("/nonexistent/panel.csv", PanelInput::Prices, nullptr));
  std::filesystem::remove(bad1);
  std::filesystem::remove(bad2);
  std::filesystem::remove(bad3);
}

TEST_CASE("returns input is taken as is") {
  const auto path = write_temp("bvine_panel6.csv", "date,X\n2020-01-01,0.01\n2020-01-02,-0.02\n");
  const auto p = ingest(path, PanelInput::Returns, nullptr);
  REQUIRE(p.days() == 2);
  REQUIRE(p.r[0][0] == 0.01);
  std::filesystem::remove(path);
}

TEST_CASE("empirical quantile uses the ceil(level*K) order statistic") {
  std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  REQUIRE(empirical_var_quantile(v, 0.05) == 1.0);
  REQUIRE(empirical_var_quantile(v, 0.10) == 1.0);
  REQUIRE(empirical_var_quantile(v, 0.11) == 2.0);
  REQUIRE(empirical_var_quantile(v, 0.975) == 10.0);
  std::vector<double> flat(100, 3.25);
  for (double lvl : {0.02, 0.05, 0.10, 0.975}) {
    REQUIRE(empirical_var_quantile(flat, lvl) == 3.25);  // degenerate paths
  }
}

TEST_CASE("portfolio returns: equal weights equal the row mean") {
  auto p = synthetic_panel(50, 4, 11);
  const auto port = portfolio_returns(p);
  for (std::size_t t = 0; t < p.days(); ++t) {
    double mean = 0.0;
    for (double v : p.r[t]) mean += v;
    mean /= 4.0;
    REQUIRE_THAT(port[t], WithinAbs(mean, 1e-12));
  }
}

TEST_CASE("hit sequence construction") {
  std::vector<VaRForecast> fs;
  std::vector<std::string> dates;
  std::vector<double> realized;
  for (int i = 0; i < 10; ++i) {
    VaRForecast f;
    f.date = "2021-01-0" + std::to_string(i);
    f.level = 0.05;
    f.short_side = false;
    f.var_value = -1.0;
    fs.push_back(f);
    dates.push_back(f.date);
    realized.push_back(i == 4 ? -2.0 : 0.5);  // one crossing
  }
  const auto hs = hit_sequence(fs, dates, realized, 0.05, false);
  REQUIRE(hs.size() == 10);
  REQUIRE(hs.hits() == 1);
  REQUIRE(hs.h[4] == 1);
  REQUIRE(hs.alpha == 0.05);

  // all realized above a long VaR: zero hits
  std::fill(realized.begin(), realized.end(), 1.0);
  REQUIRE(hit_sequence(fs, dates, realized, 0.05, false).hits() == 0);

  // misalignment throws
  std::vector<std::string> wrong_dates = dates;
  wrong_dates[3] = "1999-01-01";
  REQUIRE_THROWS(hit_sequence(fs, wrong_dates, realized, 0.05, false));
}

TEST_CASE("synthetic iid hit rate approaches alpha") {
  // VaR fixed at the known quantile of a standardized t
  auto rng = num::make_rng(9);
  const double alpha = 0.1;
  const double q = num::std_t_quantile(alpha, 6.0);
  std::size_t P = 4000, hits = 0;
  for (std::size_t i = 0; i < P; ++i) {
    if (num::std_t_quantile(num::uniform01(rng), 6.0) < q) ++hits;
  }
  const double rate = static_cast<double>(hits) / P;
  REQUIRE_THAT(rate, WithinAbs(alpha, 2.0 * std::sqrt(alpha * (1 - alpha) / P)));
}

TEST_CASE("var pipeline on a small panel") {
  const auto panel = synthetic_panel(160, 2, 321);
  VarOptions opts;
  opts.window = 120;
  opts.mc_paths = 2000;
  opts.seed = 17;
  opts.threads = 2;

  const auto both = run_var_pipeline(panel, {ModelArm::Bernstein, ModelArm::Parametric}, opts);
  REQUIRE(both.size() == 2);
  const std::size_t n_days = 160 - 120;
  const std::size_t n_levels = 4;

  for (const auto& armres : both) {
    INFO("arm " << arm_name(armres.arm));
    REQUIRE(armres.failures.empty());
    REQUIRE(armres.forecasts.size() == n_days * n_levels);
    for (std::size_t day = 0; day < n_days; ++day) {
      const auto* f = &armres.forecasts[day * n_levels];
      // monotone across long levels (one shared MC sample per day)
      REQUIRE(f[0].var_value <= f[1].var_value);
      REQUIRE(f[1].var_value <= f[2].var_value);
      // short side sits above the long quantiles
      REQUIRE(f[3].var_value >= f[2].var_value);
      REQUIRE(f[3].short_side);
      // realized column matches the panel in both arms
      REQUIRE(f[0].realized == both[0].forecasts[day * n_levels].realized);
    }
  }

  SECTION("determinism under the same seed and different thread counts") {
    VarOptions opts1 = opts;
    opts1.threads = 1;
    const auto again = run_var_pipeline(panel, {ModelArm::Bernstein}, opts1);
    const auto& a = both[0].forecasts;
    const auto& b = again[0].forecasts;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a[i].var_value == b[i].var_value);
    }
  }
}

TEST_CASE("diversification: portfolio VaR is tighter than single-asset VaR") {
  const auto panel2 = synthetic_panel(160, 2, 99);
  VarOptions opts;
  opts.window = 120;
  opts.mc_paths = 4000;
  opts.seed = 4;
  // the two synthetic assets are independent by construction, so the
  // equal-weight portfolio quantile must sit closer to zero on average
  const auto port = run_var_pipeline(panel2, {ModelArm::Bernstein}, opts)[0].forecasts;
  REQUIRE_FALSE(port.empty());
  // single-asset VaR straight from the fitted margins (exact t quantile);
  // under independence the portfolio quantile beats the average of the
  // stand-alone quantiles
  std::size_t count = 0;
  for (const auto& f : port) {
    if (f.short_side) continue;
    std::size_t day = 0;
    while (panel2.dates[day + opts.window] != f.date) ++day;
    double avg_single = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      const auto series = panel2.column(j, day, day + opts.window);
      const auto g = fit_qml(series);
      const auto fc = forecast_one_step(g, series);
      avg_single += 0.5 * (fc[0] + fc[1] * num::std_t_quantile(f.level, g.nu));
    }
    REQUIRE(f.var_value > avg_single);  // less negative
    ++count;
  }
  REQUIRE(count > 0);
}

TEST_CASE("var pipeline input validation") {
  const auto panel = synthetic_panel(100, 2, 5);
  VarOptions opts;
  opts.window = 120;
  REQUIRE_THROWS_AS(run_var_pipeline(panel, {ModelArm::Bernstein}, opts), std::invalid_argument);
  opts.window = 90;
  opts.mc_paths = 100;
  REQUIRE_THROWS_AS(run_var_pipeline(panel, {ModelArm::Bernstein}, opts), std::invalid_argument);
}
