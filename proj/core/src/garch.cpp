#include "bvine/garch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bvine/optimize.hpp"

namespace bvine {

namespace {

double sample_mean(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v;
  return s / static_cast<double>(r.size());
}

double sample_variance(const std::vector<double>& r, double mean) {
  double s = 0.0;
  for (double v : r) s += (v - mean) * (v - mean);
  return s / static_cast<double>(r.size());
}

struct Packed {
  // unconstrained parametrization:
  //   mu free, alpha0 = exp(a), persistence s = logistic(b) in (0,1),
  //   share w = logistic(c): alpha1 = s w, beta = s (1-w), nu = 2 + exp(e)
  static std::vector<double> pack(const GarchModel& g) {
    const double s = std::clamp(g.alpha1 + g.beta, 1e-8, 1.0 - 1e-8);
    const double w = std::clamp(s > 0 ? g.alpha1 / s : 0.5, 1e-8, 1.0 - 1e-8);
    return {g.mu, std::log(g.alpha0), std::log(s / (1.0 - s)), std::log(w / (1.0 - w)),
            std::log(std::max(g.nu - 2.0, 1e-6))};
  }
  static GarchModel unpack(const std::vector<double>& p, VarianceInput vi) {
    GarchModel g;
    g.mu = p[0];
    g.alpha0 = std::exp(std::clamp(p[1], -60.0, 60.0));
    const double s = 1.0 / (1.0 + std::exp(-std::clamp(p[2], -40.0, 40.0)));
    const double w = 1.0 / (1.0 + std::exp(-std::clamp(p[3], -40.0, 40.0)));
    g.alpha1 = s * w;
    g.beta = s * (1.0 - w);
    g.nu = 2.0 + std::exp(std::clamp(p[4], -20.0, 20.0));
    g.variance_input = vi;
    return g;
  }
};

double neg_loglik(const GarchModel& g, const std::vector<double>& r, double sigma2_init) {
  const std::size_t n = r.size();
  if (!(g.alpha0 > 0.0) || g.alpha1 < 0.0 || g.beta < 0.0 || g.alpha1 + g.beta >= 1.0 ||
      !(g.nu > 2.0)) {
    return 1e100;
  }
  // log density constant of the standardized t
  const double lc = std::lgamma(0.5 * (g.nu + 1.0)) - std::lgamma(0.5 * g.nu) -
                    0.5 * std::log(M_PI * (g.nu - 2.0));
  double s2 = sigma2_init;
  double nll = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (!(s2 > 0.0) || !std::isfinite(s2)) return 1e100;
    const double eps = r[t] - g.mu;
    const double z2 = eps * eps / s2;
    nll -= lc - 0.5 * std::log(s2) - 0.5 * (g.nu + 1.0) * std::log1p(z2 / (g.nu - 2.0));
    const double driver = g.variance_input == VarianceInput::Demeaned ? eps : r[t];
    s2 = g.alpha0 + g.alpha1 * driver * driver + g.beta * s2;
  }
  return std::isfinite(nll) ? nll : 1e100;
}

}  // namespace

std::vector<double> GarchModel::filter_variance(const std::vector<double>& r) const {
  const std::size_t n = r.size();
  std::vector<double> s2(n);
  const double mean = sample_mean(r);
  s2[0] = std::max(sample_variance(r, mean), 1e-12);
  for (std::size_t t = 1; t < n; ++t) {
    const double driver = variance_input == VarianceInput::Demeaned ? r[t - 1] - mu : r[t - 1];
    s2[t] = alpha0 + alpha1 * driver * driver + beta * s2[t - 1];
  }
  return s2;
}

GarchModel fit_qml(const std::vector<double>& r, GarchFitReport* report, const GarchOptions& opts) {
  const std::size_t n = r.size();
  if (n < 100) throw std::invalid_argument("fit_qml: need n >= 100");
  const double mean = sample_mean(r);
  const double var = sample_variance(r, mean);
  if (!(var > 1e-20 + 1e-16 * mean * mean)) {
    throw std::invalid_argument("fit_qml: series has zero variance");
  }

  auto objective = [&](const std::vector<double>& p) {
    GarchModel g = Packed::unpack(p, opts.variance_input);
    return neg_loglik(g, r, var);
  };

  opt::NelderMeadOptions nm;
  nm.initial_step = 0.25;
  nm.max_iter = 4000;
  nm.f_tol = 1e-10;
  nm.x_tol = 1e-8;

  // two starts; when the likelihood cannot tell them apart (the persistence
  // direction is a ridge for near-constant variance), keep the parsimonious
  // optimum
  opt::VectorResult best;
  best.fx = HUGE_VAL;
  int iterations = 0;
  bool converged = false;
  for (auto [a1, b1] : {std::pair{0.08, 0.85}, {0.05, 0.10}}) {
    GarchModel init;
    init.mu = mean;
    init.alpha1 = a1;
    init.beta = b1;
    init.alpha0 = var * (1.0 - a1 - b1);
    init.nu = 8.0;
    init.variance_input = opts.variance_input;
    auto stage1 = opt::nelder_mead(objective, Packed::pack(init), nm);
    auto stage2 = opt::bfgs_polish(objective, stage1.x);
    const auto& cand = stage2.fx <= stage1.fx ? stage2 : stage1;
    iterations += stage1.iterations + stage2.iterations;
    if (best.x.empty()) {
      best = cand;
      converged = stage1.converged || stage2.converged;
      continue;
    }
    const double tol = 1e-6 * (1.0 + std::abs(best.fx));
    if (cand.fx < best.fx - tol) {
      best = cand;
      converged = stage1.converged || stage2.converged;
    } else if (cand.fx < best.fx + tol) {
      const GarchModel gc = Packed::unpack(cand.x, opts.variance_input);
      const GarchModel gb = Packed::unpack(best.x, opts.variance_input);
      if (gc.alpha1 + gc.beta < gb.alpha1 + gb.beta) {
        best = cand;
        converged = stage1.converged || stage2.converged;
      }
    }
  }

  GarchModel g = Packed::unpack(best.x, opts.variance_input);
  bool boundary = false;
  if (g.alpha1 + g.beta > 1.0 - 1e-8) {
    // stationarity enforced; project just inside the boundary
    const double scale = (1.0 - 1e-6) / (g.alpha1 + g.beta);
    g.alpha1 *= scale;
    g.beta *= scale;
    boundary = true;
  }
  const double nll = neg_loglik(g, r, var);
  if (report) {
    report->loglik = -nll;
    report->iterations = iterations;
    report->converged = converged && std::isfinite(nll);
    report->boundary_projected = boundary;
  }
  // store the filtered state for one-step forecasting
  const auto s2 = g.filter_variance(r);
  g.sigma2_last = s2.back();
  g.eps_last = r.back() - g.mu;
  return g;
}

std::vector<double> standardized_residuals(const GarchModel& g, const std::vector<double>& r) {
  const auto s2 = g.filter_variance(r);
  std::vector<double> z(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) z[t] = (r[t] - g.mu) / std::sqrt(s2[t]);
  return z;
}

std::array<double, 2> forecast_one_step(const GarchModel& g, const std::vector<double>& r) {
  const auto s2 = g.filter_variance(r);
  const double driver =
      g.variance_input == VarianceInput::Demeaned ? r.back() - g.mu : r.back();
  const double s2_next = g.alpha0 + g.alpha1 * driver * driver + g.beta * s2.back();
  return {g.mu, std::sqrt(s2_next)};
}

std::array<double, 2> forecast_one_step(const GarchModel& g) {
  const double driver =
      g.variance_input == VarianceInput::Demeaned ? g.eps_last : g.eps_last + g.mu;
  const double s2_next = g.alpha0 + g.alpha1 * driver * driver + g.beta * g.sigma2_last;
  return {g.mu, std::sqrt(s2_next)};
}

double garch_t_quantile(double nu, double p) {
  if (!(nu > 2.0)) throw std::invalid_argument("garch_t_quantile: nu > 2 required");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("garch_t_quantile: p in (0,1) required");
  return num::std_t_quantile(p, nu);
}

std::vector<double> simulate_garch(const GarchModel& g, std::size_t n, num::Rng& rng,
                                   std::size_t burnin) {
  std::vector<double> out;
  out.reserve(n);
  double s2 = g.alpha1 + g.beta < 1.0 ? g.alpha0 / (1.0 - g.alpha1 - g.beta) : g.alpha0;
  for (std::size_t t = 0; t < n + burnin; ++t) {
    const double z = num::std_t_quantile(num::uniform01(rng), g.nu);
    const double r = g.mu + std::sqrt(s2) * z;
    if (t >= burnin) out.push_back(r);
    const double driver = g.variance_input == VarianceInput::Demeaned ? r - g.mu : r;
    s2 = g.alpha0 + g.alpha1 * driver * driver + g.beta * s2;
  }
  return out;
}

}  // namespace bvine
