#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvine/backtests.hpp"
#include "bvine/garch.hpp"
#include "bvine/vine.hpp"

namespace bvine {

struct ReturnPanel {
  std::vector<std::string> dates;      // ISO dates, strictly increasing
  std::vector<std::string> assets;
  std::vector<std::vector<double>> r;  // rows: days, cols: assets (log returns)

  std::size_t days() const { return r.size(); }
  std::size_t dim() const { return assets.size(); }
  std::vector<double> column(std::size_t j, std::size_t begin, std::size_t end) const;
};

struct ScreeningFlag {
  std::string kind;  // "sub-dollar-price" | "extreme-return-reversal"
  std::string date;
  std::string asset;
  double value = 0.0;
  std::string detail;
};

struct ScreeningReport {
  std::vector<ScreeningFlag> flags;
};

enum class PanelInput { Prices, Returns };

/// Parse a delimiter-separated panel (first column ISO dates, header row of
/// asset names). Price input is converted to log returns. Screening flags
/// sub-$1 prices and |log return| > 300% reversed within 21 trading days;
/// flags are warnings, rows are never dropped.
ReturnPanel ingest(const std::string& path, PanelInput input, ScreeningReport* report = nullptr);

enum class ModelArm { Bernstein, Parametric };
const char* arm_name(ModelArm a);

struct VaRForecast {
  std::string date;
  double level = 0.0;   // percentile used (e.g. 0.02 long, 0.975 short)
  bool short_side = false;
  double var_value = 0.0;
  double realized = 0.0;
  int hit = 0;
  std::size_t mc_paths = 0;
};

struct DayFailure {
  std::string date;
  ModelArm arm = ModelArm::Bernstein;
  std::string reason;
};

struct VarOptions {
  std::size_t window = 500;
  std::vector<double> long_levels = {0.02, 0.05, 0.10};
  std::vector<double> short_levels = {0.975};
  std::size_t mc_paths = 10000;  // K
  std::uint64_t seed = 1;
  int bernstein_m = 0;  // 0 = cube-root default from the window length
  VineKind vine_kind = VineKind::CVine;
  int refit_every = 1;  // GARCH/vine refit cadence in days
  int threads = 1;
  std::vector<double> weights;  // empty = equal
  VarianceInput variance_input = VarianceInput::Demeaned;
};

struct ArmForecasts {
  ModelArm arm = ModelArm::Bernstein;
  std::vector<VaRForecast> forecasts;  // day-major, levels in option order
  std::vector<DayFailure> failures;
  int unstable_days = 0;  // parametric arm: days whose vine fit logged events
};

/// Rolling one-day-ahead Monte-Carlo VaR for each requested arm. GARCH
/// margins are fitted once per day and shared across arms; one MC sample per
/// day serves all confidence levels.
std::vector<ArmForecasts> run_var_pipeline(const ReturnPanel& panel,
                                           const std::vector<ModelArm>& arms,
                                           const VarOptions& opts);

/// Single-arm convenience wrapper.
std::vector<VaRForecast> forecast_var(const ReturnPanel& panel, ModelArm arm,
                                      const VarOptions& opts);

/// Hits of one (level, side) slice of a forecast series against realized
/// returns keyed by date. Throws on misaligned dates.
HitSequence hit_sequence(const std::vector<VaRForecast>& forecasts,
                         const std::vector<std::string>& dates,
                         const std::vector<double>& realized, double level, bool short_side);

/// Equal- or custom-weighted portfolio log return per day.
std::vector<double> portfolio_returns(const ReturnPanel& panel,
                                      const std::vector<double>& weights = {});

/// Lower empirical quantile: the order statistic at index ceil(level * K)
/// (1-based) of the ascending-sorted sample.
double empirical_var_quantile(const std::vector<double>& sorted, double level);

}  // namespace bvine
