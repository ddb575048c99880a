#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "bvine/numerics.hpp"

namespace bvine {

/// Which squared innovation drives the variance recursion: the demeaned
/// residual (standard GARCH) or the raw return.
enum class VarianceInput { Demeaned, Raw };

/// GARCH(1,1) with standardized Student t innovations:
///   r_t = mu + sigma_t Z_t,   sigma^2_t = alpha0 + alpha1 e^2_{t-1} + beta sigma^2_{t-1}
struct GarchModel {
  double mu = 0.0;
  double alpha0 = 1e-6;
  double alpha1 = 0.0;
  double beta = 0.0;
  double nu = 8.0;  // > 2
  VarianceInput variance_input = VarianceInput::Demeaned;

  // filtered state at the end of the fit window
  double sigma2_last = 0.0;
  double eps_last = 0.0;

  /// Conditional variance path over a series; sigma^2_1 starts at the
  /// sample variance of the window.
  std::vector<double> filter_variance(const std::vector<double>& r) const;
};

struct GarchFitReport {
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  bool boundary_projected = false;  // alpha1 + beta pushed below 1
};

struct GarchOptions {
  VarianceInput variance_input = VarianceInput::Demeaned;
};

/// Quasi-ML fit (Student t likelihood on standardized residuals). Parameters
/// are optimized in an unconstrained transform (log alpha0, logistic
/// persistence split, log(nu-2)) by Nelder-Mead with a BFGS polish.
/// Requires n >= 100 and a series with positive variance.
GarchModel fit_qml(const std::vector<double>& r, GarchFitReport* report = nullptr,
                   const GarchOptions& opts = {});

/// z_t = (r_t - mu) / sigma_t from the filtered recursion.
std::vector<double> standardized_residuals(const GarchModel& g, const std::vector<double>& r);

/// One-step-ahead (mu, sigma) after filtering the given series.
std::array<double, 2> forecast_one_step(const GarchModel& g, const std::vector<double>& r);
/// Same, from the state stored at fit time.
std::array<double, 2> forecast_one_step(const GarchModel& g);

/// Quantile of the unit-variance Student t (the innovation distribution).
double garch_t_quantile(double nu, double p);

/// Simulate a return path (burn-in discarded); used by tests and fixtures.
std::vector<double> simulate_garch(const GarchModel& g, std::size_t n, num::Rng& rng,
                                   std::size_t burnin = 500);

}  // namespace bvine
