#include "bvine/backtests.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "bvine/optimize.hpp"

namespace bvine {

namespace {

// 0 * log 0 = 0 convention used by every likelihood here
double xlogy(double x, double y) { return x > 0.0 ? x * std::log(y) : 0.0; }

double bernoulli_loglik(double p1, double p0, double pi) {
  return xlogy(p1, pi) + xlogy(p0, 1.0 - pi);
}

struct Transitions {
  double n00 = 0, n01 = 0, n10 = 0, n11 = 0;
};

Transitions count_transitions(const HitSequence& h) {
  Transitions t;
  for (std::size_t i = 1; i < h.h.size(); ++i) {
    const int a = h.h[i - 1], b = h.h[i];
    if (a == 0 && b == 0) t.n00 += 1;
    else if (a == 0 && b == 1) t.n01 += 1;
    else if (a == 1 && b == 0) t.n10 += 1;
    else t.n11 += 1;
  }
  return t;
}

double markov_loglik(const Transitions& t, double p01, double p11) {
  return xlogy(t.n00, 1.0 - p01) + xlogy(t.n01, p01) + xlogy(t.n10, 1.0 - p11) +
         xlogy(t.n11, p11);
}

}  // namespace

std::size_t HitSequence::hits() const {
  std::size_t c = 0;
  for (auto v : h) c += v;
  return c;
}

DurationSeries durations(const HitSequence& h) {
  DurationSeries ds;
  const std::size_t P = h.h.size();
  std::vector<std::size_t> times;  // 1-based hit positions
  for (std::size_t t = 0; t < P; ++t) {
    if (h.h[t]) times.push_back(t + 1);
  }
  if (times.empty()) {
    if (P > 0) ds.leading = static_cast<double>(P);
    return ds;
  }
  ds.leading = static_cast<double>(times.front());
  for (std::size_t i = 1; i < times.size(); ++i) {
    ds.interior.push_back(static_cast<double>(times[i] - times[i - 1]));
  }
  if (times.back() < P) ds.trailing = static_cast<double>(P - times.back());
  return ds;
}

double lr_uc_statistic(const HitSequence& h) {
  const double P = static_cast<double>(h.h.size());
  if (P < 1) throw std::invalid_argument("lr_uc: empty hit sequence");
  const double P1 = static_cast<double>(h.hits());
  const double P0 = P - P1;
  const double pi_hat = P1 / P;
  return 2.0 * (bernoulli_loglik(P1, P0, pi_hat) - bernoulli_loglik(P1, P0, h.alpha));
}

double lr_ind_statistic(const HitSequence& h) {
  if (h.h.size() < 2) throw std::invalid_argument("lr_ind: need P >= 2");
  const auto t = count_transitions(h);
  const double from0 = t.n00 + t.n01, from1 = t.n10 + t.n11;
  const double p01 = from0 > 0 ? t.n01 / from0 : 0.0;
  const double p11 = from1 > 0 ? t.n11 / from1 : 0.0;
  const double pi_hat = static_cast<double>(h.hits()) / static_cast<double>(h.h.size());
  // the restricted point (pi, pi) lies inside the Markov parameter space, so
  // the statistic is nonnegative by construction
  return 2.0 * (markov_loglik(t, p01, p11) - markov_loglik(t, pi_hat, pi_hat));
}

namespace {

struct WeibullFit {
  double a = 0.0, b = 1.0;
  double loglik = 0.0;
  bool converged = true;
};

// profile log-likelihood in b with closed-form a(b); censored spells enter
// through survival terms exp(-(aC)^b)
double weibull_profile(const DurationSeries& ds, double b, double* a_out) {
  const double n_u = static_cast<double>(ds.interior.size());
  double sum_tb = 0.0, sum_logd = 0.0;
  for (double d : ds.interior) {
    sum_tb += std::pow(d, b);
    sum_logd += std::log(d);
  }
  if (ds.leading) sum_tb += std::pow(*ds.leading, b);
  if (ds.trailing) sum_tb += std::pow(*ds.trailing, b);
  const double ab = n_u / sum_tb;  // a^b
  if (a_out) *a_out = std::pow(ab, 1.0 / b);
  return n_u * (std::log(ab) + std::log(b)) + (b - 1.0) * sum_logd - n_u;
}

WeibullFit fit_weibull(const DurationSeries& ds) {
  WeibullFit fit;
  auto nll = [&](double b) { return -weibull_profile(ds, b, nullptr); };
  auto r = opt::brent_minimize(nll, 0.05, 50.0, 1e-8, 200);
  fit.b = r.x;
  fit.loglik = -r.fx;
  fit.converged = r.converged;
  weibull_profile(ds, fit.b, &fit.a);
  return fit;
}

}  // namespace

double weibull_statistic(const DurationSeries& ds, bool* applicable, bool* converged) {
  if (applicable) *applicable = true;
  if (converged) *converged = true;
  if (ds.interior.size() < 2) {
    if (applicable) *applicable = false;
    return 0.0;
  }
  const double ll_exp = weibull_profile(ds, 1.0, nullptr);
  const auto fit = fit_weibull(ds);
  if (converged) *converged = fit.converged;
  const double ll_w = std::max(fit.loglik, ll_exp);  // b = 1 is in the domain
  return 2.0 * (ll_w - ll_exp);
}

namespace {

double eacd_loglik(const std::vector<double>& d, double omega, double beta) {
  if (!(omega > 0.0) || beta < 0.0) return -1e100;
  double ll = 0.0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double psi = omega + beta * d[i - 1];
    if (!(psi > 0.0)) return -1e100;
    ll += -std::log(psi) - d[i] / psi;
  }
  return ll;
}

}  // namespace

double eacd_statistic(const DurationSeries& ds, bool* applicable, bool* converged) {
  if (applicable) *applicable = true;
  if (converged) *converged = true;
  const auto& d = ds.interior;
  if (d.size() < 3) {
    if (applicable) *applicable = false;
    return 0.0;
  }
  double mean = 0.0;
  for (std::size_t i = 1; i < d.size(); ++i) mean += d[i];
  mean /= static_cast<double>(d.size() - 1);
  const double ll0 = eacd_loglik(d, mean, 0.0);

  auto nll = [&](const std::vector<double>& p) {
    return -eacd_loglik(d, std::exp(std::clamp(p[0], -30.0, 30.0)),
                        std::exp(std::clamp(p[1], -30.0, 10.0)));
  };
  opt::NelderMeadOptions nm;
  nm.initial_step = 0.5;
  nm.max_iter = 400;
  auto r = opt::nelder_mead(nll, {std::log(std::max(mean * 0.9, 1e-6)), std::log(0.1)}, nm);
  if (converged) *converged = r.converged;
  const double ll1 = std::max(-r.fx, ll0);  // beta -> 0 recovers the null
  return 2.0 * (ll1 - ll0);
}

// ---------------------------------------------------------------------------
// Monte-Carlo p-values
// ---------------------------------------------------------------------------

namespace {

double statistic_of(BacktestKind kind, const HitSequence& h) {
  switch (kind) {
    case BacktestKind::UC: return lr_uc_statistic(h);
    case BacktestKind::CC: return lr_uc_statistic(h) + lr_ind_statistic(h);
    case BacktestKind::WeibullDuration: {
      bool app = true;
      const auto ds = durations(h);
      const double s = weibull_statistic(ds, &app, nullptr);
      return app ? s : 0.0;  // undefined statistics rank lowest
    }
    case BacktestKind::EacdDuration: {
      bool app = true;
      const auto ds = durations(h);
      const double s = eacd_statistic(ds, &app, nullptr);
      return app ? s : 0.0;
    }
  }
  return 0.0;
}

}  // namespace

std::vector<double> simulate_null_statistics(BacktestKind kind, std::size_t P, double alpha,
                                             const McOptions& mc) {
  auto rng = num::substream(mc.seed, {static_cast<std::uint64_t>(kind), P,
                                      std::bit_cast<std::uint64_t>(alpha)});
  std::vector<double> stats;
  stats.reserve(mc.replications);
  HitSequence sim;
  sim.alpha = alpha;
  sim.h.resize(P);
  for (int r = 0; r < mc.replications; ++r) {
    for (std::size_t t = 0; t < P; ++t) sim.h[t] = num::uniform01(rng) < alpha ? 1 : 0;
    stats.push_back(statistic_of(kind, sim));
  }
  std::sort(stats.begin(), stats.end());
  return stats;
}

double mc_p_value(double observed, const std::vector<double>& sorted_null) {
  const auto it = std::lower_bound(sorted_null.begin(), sorted_null.end(), observed);
  const std::size_t geq = sorted_null.end() - it;
  return (1.0 + static_cast<double>(geq)) / (static_cast<double>(sorted_null.size()) + 1.0);
}

namespace {

BacktestResult run_test(BacktestKind kind, const HitSequence& h, const McOptions& mc) {
  BacktestResult out;
  if (kind == BacktestKind::UC) {
    out.statistic = lr_uc_statistic(h);
  } else if (kind == BacktestKind::CC) {
    out.statistic = lr_uc_statistic(h) + lr_ind_statistic(h);
  } else {
    const auto ds = durations(h);
    out.statistic = kind == BacktestKind::WeibullDuration
                        ? weibull_statistic(ds, &out.applicable, &out.converged)
                        : eacd_statistic(ds, &out.applicable, &out.converged);
    if (!out.applicable) {
      out.p_value = std::nan("");
      return out;
    }
  }
  const auto null_stats = simulate_null_statistics(kind, h.h.size(), h.alpha, mc);
  out.p_value = mc_p_value(out.statistic, null_stats);
  return out;
}

}  // namespace

BacktestResult lr_uc(const HitSequence& h, const McOptions& mc) {
  return run_test(BacktestKind::UC, h, mc);
}

BacktestResult lr_cc(const HitSequence& h, const McOptions& mc) {
  if (h.h.size() < 2) throw std::invalid_argument("lr_cc: need P >= 2");
  return run_test(BacktestKind::CC, h, mc);
}

BacktestResult weibull_duration_test(const HitSequence& h, const McOptions& mc) {
  return run_test(BacktestKind::WeibullDuration, h, mc);
}

BacktestResult eacd_duration_test(const HitSequence& h, const McOptions& mc) {
  return run_test(BacktestKind::EacdDuration, h, mc);
}

}  // namespace bvine
