#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bvine/numerics.hpp"

namespace bvine {

/// Binary VaR-exceedance series at nominal level alpha.
struct HitSequence {
  std::vector<std::uint8_t> h;
  double alpha = 0.0;

  std::size_t size() const { return h.size(); }
  std::size_t hits() const;
};

/// Gaps between consecutive hits. The leading spell (start to first hit) and
/// the trailing spell (last hit to end) are censored; they enter likelihoods
/// through survival terms only.
struct DurationSeries {
  std::vector<double> interior;          // D_i = t_i - t_{i-1}
  std::optional<double> leading;         // censored, absent when h_1 = 1
  std::optional<double> trailing;        // censored, absent when h_P = 1
};

DurationSeries durations(const HitSequence& h);

struct BacktestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool applicable = true;   // false when the statistic is undefined (too few hits)
  bool converged = true;    // ML convergence of the alternative model
};

/// Null distributions are simulated: N Bernoulli(alpha) sequences of length
/// P, the statistic recomputed on each, p = (1 + #{sim >= obs}) / (N + 1).
struct McOptions {
  int replications = 9999;
  std::uint64_t seed = 20120619;
};

/// Unconditional coverage: LR_UC = 2 (lnL(pi_hat) - lnL(alpha)) >= 0.
BacktestResult lr_uc(const HitSequence& h, const McOptions& mc = {});

/// Conditional coverage: LR_CC = LR_UC + LR_ind with the first-order Markov
/// independence component.
BacktestResult lr_cc(const HitSequence& h, const McOptions& mc = {});

/// Weibull duration test of H0: b = 1 (exponential no-hit durations),
/// censored spells contributing survival terms.
BacktestResult weibull_duration_test(const HitSequence& h, const McOptions& mc = {});

/// EACD(1,0) duration test of H0: beta = 0 in psi_i = omega + beta D_{i-1}.
BacktestResult eacd_duration_test(const HitSequence& h, const McOptions& mc = {});

// statistic-only entry points (shared by the MC machinery and by tests)
double lr_uc_statistic(const HitSequence& h);
double lr_ind_statistic(const HitSequence& h);
double weibull_statistic(const DurationSeries& ds, bool* applicable, bool* converged);
double eacd_statistic(const DurationSeries& ds, bool* applicable, bool* converged);

/// Simulated null statistics for (P, alpha), sorted ascending. Exposed so
/// calibration studies can share one null sample across replications.
enum class BacktestKind { UC, CC, WeibullDuration, EacdDuration };
std::vector<double> simulate_null_statistics(BacktestKind kind, std::size_t P, double alpha,
                                             const McOptions& mc);
double mc_p_value(double observed, const std::vector<double>& sorted_null);

}  // namespace bvine
