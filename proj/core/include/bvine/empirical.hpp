#pragma once

#include <cstddef>
#include <vector>

namespace bvine {

/// Rank-transformed pseudo-observations, stored column-wise. Ranks are
/// scaled by n+1 so values stay strictly inside (0,1).
struct PseudoSample {
  std::vector<std::vector<double>> cols;

  std::size_t n() const { return cols.empty() ? 0 : cols[0].size(); }
  std::size_t dim() const { return cols.size(); }
};

/// Column-wise average ranks divided by (n+1). Input is column-major.
PseudoSample pseudo_observations(const std::vector<std::vector<double>>& x);

/// Deheuvels empirical copula C_n(x, y) of a bivariate pseudo-sample.
double empirical_copula_cdf(const std::vector<double>& u, const std::vector<double>& v, double x,
                            double y);

/// Kendall's tau-b (tie adjusted), O(n log n). Throws on a zero-variance
/// column.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);
double kendall_tau(const PseudoSample& s, std::size_t i, std::size_t j);

/// Pairwise |tau| matrix helper used by structure selection.
std::vector<std::vector<double>> kendall_tau_matrix(const PseudoSample& s);

/// Gridded relative frequencies of a bivariate sample on (0,1]^2.
struct ContingencyTable {
  int m = 0;
  std::vector<double> a;  // row-major m*m, sums to 1
  std::vector<double> row_sums;
  std::vector<double> col_sums;

  double& at(int k, int l) { return a[static_cast<std::size_t>(k) * m + l]; }
  double at(int k, int l) const { return a[static_cast<std::size_t>(k) * m + l]; }
};

/// Cell (k,l) covers ((k-1)/m, k/m] x ((l-1)/m, l/m] with the first cell
/// closed on the left.
ContingencyTable bin_to_table(const std::vector<double>& u, const std::vector<double>& v, int m);

}  // namespace bvine
