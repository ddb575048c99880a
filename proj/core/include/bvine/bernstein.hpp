#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "bvine/empirical.hpp"
#include "bvine/margin_projection.hpp"
#include "bvine/numerics.hpp"

namespace bvine {

/// Bernstein polynomial B(m, k, z) = C(m,k) z^k (1-z)^(m-k), evaluated in
/// log space once m gets large.
double bernstein_basis(int m, int k, double z);

/// Smooth nonparametric copula with weights p on an m x m grid. Weights are
/// nonnegative with uniform margins 1/m, so the mixture of Beta-density
/// products integrates to a proper copula.
class BernsteinCopula {
 public:
  BernsteinCopula() = default;
  BernsteinCopula(int m, std::vector<double> weights);

  int grid_size() const { return m_; }
  const std::vector<double>& weights() const { return p_; }
  double weight(int k, int l) const { return p_[static_cast<std::size_t>(k) * m_ + l]; }

  double density(double u, double v) const;
  double cdf(double u, double v) const;

  /// h1(v | u) = dC/du, h2(u | v) = dC/dv; both are cdfs in their first
  /// argument. Inverses use bisection to width 1e-3 followed by Newton with
  /// the analytic derivative (the copula density).
  double h1(double v, double u) const;
  double h2(double u, double v) const;
  double h1_inverse(double w, double u) const;
  double h2_inverse(double w, double v) const;

  /// Exact mixture sampling: draw a cell by weight, then Beta(k+1, m-k)
  /// coordinates within it.
  std::vector<std::array<double, 2>> sample(std::size_t n, num::Rng& rng) const;

 private:
  std::vector<double> basis_row(int degree, double z) const;

  int m_ = 0;
  std::vector<double> p_;         // m x m
  std::vector<double> cum_;       // (m+1) x (m+1): P(U1 < k, U2 < l)
  std::vector<double> row_pref_;  // m x (m+1): sum_{j<l} p[k][j]
  std::vector<double> col_pref_;  // m x (m+1): sum_{i<k} p[i][l]  (indexed [l][k])
  std::vector<double> cell_cdf_;  // m*m cumulative cell weights for sampling
  std::vector<double> binom_m_;   // C(m, .)
  std::vector<double> binom_m1_;  // C(m-1, .)
};

struct BernsteinFitInfo {
  double qp_objective = 0.0;
  int qp_iterations = 0;
  int qp_active_set = 0;
  bool small_sample = false;  // n < 5 m^2
};

/// Fit pipeline: contingency table of the pseudo-sample, then QP projection
/// onto uniform margins. Requires n >= m.
BernsteinCopula fit_bernstein(const std::vector<double>& u, const std::vector<double>& v, int m,
                              BernsteinFitInfo* info = nullptr);

/// Default grid size max(4, round(n^(1/3))).
int bernstein_default_grid(std::size_t n);

}  // namespace bvine
