#include "bvine/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bvine/io.hpp"
#include "bvine/threading.hpp"

namespace bvine {

namespace {

constexpr double kExtremeLogReturn = 3.0;  // 300%
constexpr int kReversalWindow = 21;        // trading days in "one month"

}  // namespace

std::vector<double> ReturnPanel::column(std::size_t j, std::size_t begin, std::size_t end) const {
  std::vector<double> out;
  out.reserve(end - begin);
  for (std::size_t t = begin; t < end; ++t) out.push_back(r[t][j]);
  return out;
}

const char* arm_name(ModelArm a) { return a == ModelArm::Bernstein ? "bernstein" : "parametric"; }

ReturnPanel ingest(const std::string& path, PanelInput input, ScreeningReport* report) {
  const auto file = io::read_delimited(path);
  if (file.header.size() < 2) throw std::runtime_error("panel needs a date column and assets");
  if (file.rows.size() < 2) throw std::runtime_error("panel needs at least two rows");

  const std::size_t d = file.header.size() - 1;
  std::vector<std::string> dates;
  std::vector<std::vector<double>> values;  // prices or returns as given
  dates.reserve(file.rows.size());
  for (const auto& row : file.rows) {
    if (row.size() != d + 1) {
      throw std::runtime_error("panel row has " + std::to_string(row.size()) +
                               " fields, expected " + std::to_string(d + 1));
    }
    dates.push_back(row[0]);
    std::vector<double> v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = io::parse_double(row[j + 1]);
    values.push_back(std::move(v));
  }
  for (std::size_t t = 1; t < dates.size(); ++t) {
    if (!(dates[t] > dates[t - 1])) {
      throw std::runtime_error("panel dates must be strictly increasing (row " +
                               std::to_string(t + 1) + ")");
    }
  }

  ReturnPanel panel;
  panel.assets.assign(file.header.begin() + 1, file.header.end());

  if (input == PanelInput::Prices) {
    for (std::size_t t = 0; t < values.size(); ++t) {
      for (std::size_t j = 0; j < d; ++j) {
        if (!(values[t][j] > 0.0)) {
          throw std::runtime_error("non-positive price for " + panel.assets[j] + " on " + dates[t]);
        }
        if (report && values[t][j] < 1.0) {
          report->flags.push_back({"sub-dollar-price", dates[t], panel.assets[j], values[t][j],
                                   "price below $1 may carry rounding error"});
        }
      }
    }
    panel.dates.assign(dates.begin() + 1, dates.end());
    panel.r.resize(values.size() - 1, std::vector<double>(d));
    for (std::size_t t = 1; t < values.size(); ++t) {
      for (std::size_t j = 0; j < d; ++j) {
        panel.r[t - 1][j] = std::log(values[t][j] / values[t - 1][j]);
      }
    }
  } else {
    panel.dates = dates;
    panel.r = std::move(values);
  }

  if (report) {
    // extreme log returns reversed within a month: flag the pair
    const std::size_t T = panel.days();
    for (std::size_t j = 0; j < panel.dim(); ++j) {
      for (std::size_t t = 0; t < T; ++t) {
        const double rt = panel.r[t][j];
        if (std::abs(rt) <= kExtremeLogReturn) continue;
        const std::size_t hi = std::min(T, t + 1 + kReversalWindow);
        for (std::size_t s = t + 1; s < hi; ++s) {
          const double rs = panel.r[s][j];
          if (std::abs(rs) > kExtremeLogReturn && rs * rt < 0.0) {
            report->flags.push_back({"extreme-return-reversal", panel.dates[t], panel.assets[j],
                                     rt, "reversed by " + io::format_full(rs) + " on " +
                                             panel.dates[s]});
            report->flags.push_back({"extreme-return-reversal", panel.dates[s], panel.assets[j],
                                     rs, "reverses " + io::format_full(rt) + " of " +
                                             panel.dates[t]});
            break;
          }
        }
      }
    }
  }
  return panel;
}

std::vector<double> portfolio_returns(const ReturnPanel& panel, const std::vector<double>& weights) {
  const std::size_t d = panel.dim();
  std::vector<double> w = weights;
  if (w.empty()) w.assign(d, 1.0 / static_cast<double>(d));
  if (w.size() != d) throw std::invalid_argument("weights dimension mismatch");
  std::vector<double> out(panel.days());
  for (std::size_t t = 0; t < panel.days(); ++t) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += w[j] * panel.r[t][j];
    out[t] = s;
  }
  return out;
}

double empirical_var_quantile(const std::vector<double>& sorted, double level) {
  const std::size_t K = sorted.size();
  if (K == 0) throw std::invalid_argument("empirical quantile of an empty sample");
  std::size_t idx = static_cast<std::size_t>(std::ceil(level * static_cast<double>(K)));
  idx = std::clamp<std::size_t>(idx, 1, K);
  return sorted[idx - 1];
}

namespace {

struct DayMargins {
  std::vector<GarchModel> models;     // one per asset
  std::vector<double> mu_hat;
  std::vector<double> sigma_hat;
  PseudoSample pseudo;                // pseudo-observations of residuals
};

}  // namespace

std::vector<ArmForecasts> run_var_pipeline(const ReturnPanel& panel,
                                           const std::vector<ModelArm>& arms,
                                           const VarOptions& opts) {
  const std::size_t T = panel.days(), d = panel.dim(), W = opts.window;
  if (T < W + 1) throw std::invalid_argument("panel shorter than window + 1");
  if (opts.mc_paths < 1000) throw std::invalid_argument("K >= 1000 required");
  const std::size_t n_days = T - W;

  std::vector<double> w = opts.weights;
  if (w.empty()) w.assign(d, 1.0 / static_cast<double>(d));
  if (w.size() != d) throw std::invalid_argument("weights dimension mismatch");
  const auto realized_all = portfolio_returns(panel, w);

  const int m = opts.bernstein_m > 0 ? opts.bernstein_m : bernstein_default_grid(W);
  const int refit = std::max(1, opts.refit_every);

  // ---- margins: fit on refit days (parallel), reuse parameters in between
  std::vector<DayMargins> margins(n_days);
  std::vector<std::size_t> refit_days;
  for (std::size_t day = 0; day < n_days; day += refit) refit_days.push_back(day);

  auto fit_margins = [&](std::size_t day) {
    DayMargins dm;
    dm.models.resize(d);
    dm.mu_hat.resize(d);
    dm.sigma_hat.resize(d);
    std::vector<std::vector<double>> resid(d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto series = panel.column(j, day, day + W);
      GarchOptions go;
      go.variance_input = opts.variance_input;
      dm.models[j] = fit_qml(series, nullptr, go);
      const auto f = forecast_one_step(dm.models[j], series);
      dm.mu_hat[j] = f[0];
      dm.sigma_hat[j] = f[1];
      resid[j] = standardized_residuals(dm.models[j], series);
    }
    dm.pseudo = pseudo_observations(resid);
    return dm;
  };
  parallel_for(refit_days.size(), opts.threads,
               [&](std::size_t i) { margins[refit_days[i]] = fit_margins(refit_days[i]); });
  for (std::size_t day = 0; day < n_days; ++day) {
    if (day % refit == 0) continue;
    const std::size_t base = day - day % refit;
    DayMargins dm;
    dm.models = margins[base].models;
    dm.mu_hat.resize(d);
    dm.sigma_hat.resize(d);
    std::vector<std::vector<double>> resid(d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto series = panel.column(j, day, day + W);
      const auto f = forecast_one_step(dm.models[j], series);
      dm.mu_hat[j] = f[0];
      dm.sigma_hat[j] = f[1];
      resid[j] = standardized_residuals(dm.models[j], series);
    }
    dm.pseudo = pseudo_observations(resid);
    margins[day] = std::move(dm);
  }

  // ---- per-day dependence fit + Monte Carlo, per arm
  std::vector<ArmForecasts> results(arms.size());
  const std::size_t n_levels = opts.long_levels.size() + opts.short_levels.size();
  for (std::size_t a = 0; a < arms.size(); ++a) {
    results[a].arm = arms[a];
    results[a].forecasts.resize(n_days * n_levels);
  }
  std::vector<std::vector<DayFailure>> failures(n_days);
  std::vector<std::vector<int>> unstable(n_days, std::vector<int>(arms.size(), 0));
  std::vector<std::vector<char>> day_ok(n_days, std::vector<char>(arms.size(), 1));

  parallel_for(n_days, opts.threads, [&](std::size_t day) {
    const auto& dm = margins[day];
    const std::string& date = panel.dates[day + W];
    const double realized = realized_all[day + W];

    for (std::size_t a = 0; a < arms.size(); ++a) {
      try {
        const auto structure = select_order(dm.pseudo, opts.vine_kind);
        VineModel model;
        VineFitReport report;
        if (arms[a] == ModelArm::Bernstein) {
          model = fit_sequential_bernstein(dm.pseudo, structure, m, &report);
        } else {
          model = fit_sequential_parametric(dm.pseudo, structure, &report);
          if (report.unstable()) unstable[day][a] = 1;
        }
        auto rng = num::substream(opts.seed, {static_cast<std::uint64_t>(day),
                                              static_cast<std::uint64_t>(arms[a])});
        const auto sims = simulate(model, opts.mc_paths, rng);
        std::vector<double> port(opts.mc_paths);
        for (std::size_t k = 0; k < sims.size(); ++k) {
          double s = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            const double z = num::std_t_quantile(sims[k][j], dm.models[j].nu);
            s += w[j] * (dm.mu_hat[j] + dm.sigma_hat[j] * z);
          }
          port[k] = s;
        }
        std::sort(port.begin(), port.end());

        std::size_t slot = day * n_levels;
        for (double lvl : opts.long_levels) {
          VaRForecast f;
          f.date = date;
          f.level = lvl;
          f.short_side = false;
          f.var_value = empirical_var_quantile(port, lvl);
          f.realized = realized;
          f.hit = realized < f.var_value ? 1 : 0;
          f.mc_paths = opts.mc_paths;
          results[a].forecasts[slot++] = std::move(f);
        }
        for (double lvl : opts.short_levels) {
          VaRForecast f;
          f.date = date;
          f.level = lvl;
          f.short_side = true;
          f.var_value = empirical_var_quantile(port, lvl);
          f.realized = realized;
          f.hit = realized > f.var_value ? 1 : 0;
          f.mc_paths = opts.mc_paths;
          results[a].forecasts[slot++] = std::move(f);
        }
      } catch (const std::exception& ex) {
        failures[day].push_back({date, arms[a], ex.what()});
        day_ok[day][a] = 0;
      }
    }
  });

  for (std::size_t a = 0; a < arms.size(); ++a) {
    std::vector<VaRForecast> kept;
    kept.reserve(results[a].forecasts.size());
    for (std::size_t day = 0; day < n_days; ++day) {
      if (!day_ok[day][a]) continue;
      for (std::size_t l = 0; l < n_levels; ++l) {
        kept.push_back(std::move(results[a].forecasts[day * n_levels + l]));
      }
      results[a].unstable_days += unstable[day][a];
    }
    results[a].forecasts = std::move(kept);
    for (std::size_t day = 0; day < n_days; ++day) {
      for (auto& fl : failures[day]) {
        if (fl.arm == arms[a]) results[a].failures.push_back(fl);
      }
    }
  }
  return results;
}

std::vector<VaRForecast> forecast_var(const ReturnPanel& panel, ModelArm arm,
                                      const VarOptions& opts) {
  return run_var_pipeline(panel, {arm}, opts)[0].forecasts;
}

HitSequence hit_sequence(const std::vector<VaRForecast>& forecasts,
                         const std::vector<std::string>& dates,
                         const std::vector<double>& realized, double level, bool short_side) {
  if (dates.size() != realized.size()) throw std::invalid_argument("hit_sequence: misaligned input");
  HitSequence hs;
  hs.alpha = short_side ? 1.0 - level : level;
  std::size_t cursor = 0;
  for (const auto& f : forecasts) {
    if (f.level != level || f.short_side != short_side) continue;
    while (cursor < dates.size() && dates[cursor] != f.date) ++cursor;
    if (cursor == dates.size()) {
      throw std::invalid_argument("hit_sequence: forecast date " + f.date +
                                  " missing from realized series");
    }
    const double r = realized[cursor];
    hs.h.push_back(short_side ? (r > f.var_value ? 1 : 0) : (r < f.var_value ? 1 : 0));
  }
  return hs;
}

}  // namespace bvine
