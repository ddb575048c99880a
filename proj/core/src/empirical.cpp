#include "bvine/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bvine {

PseudoSample pseudo_observations(const std::vector<std::vector<double>>& x) {
  if (x.empty()) throw std::invalid_argument("pseudo_observations: no columns");
  const std::size_t n = x[0].size();
  if (n < 2) throw std::invalid_argument("pseudo_observations: need n >= 2");
  PseudoSample out;
  out.cols.reserve(x.size());
  std::vector<std::size_t> idx(n);
  for (const auto& col : x) {
    if (col.size() != n) throw std::invalid_argument("pseudo_observations: ragged input");
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && col[idx[j + 1]] == col[idx[i]]) ++j;
      // average rank for the tie run [i, j]
      const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg / static_cast<double>(n + 1);
      i = j + 1;
    }
    out.cols.push_back(std::move(r));
  }
  return out;
}

double empirical_copula_cdf(const std::vector<double>& u, const std::vector<double>& v, double x,
                            double y) {
  if (u.size() != v.size() || u.empty()) {
    throw std::invalid_argument("empirical_copula_cdf: bad sample");
  }
  std::size_t count = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] <= x && v[k] <= y) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(u.size());
}

namespace {

// counts exchanges needed to sort y ascending (merge sort)
std::uint64_t merge_count(std::vector<double>& y, std::vector<double>& buf, std::size_t lo,
                          std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(y, buf, lo, mid) + merge_count(y, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (y[j] < y[i]) {
      swaps += mid - i;
      buf[k++] = y[j++];
    } else {
      buf[k++] = y[i++];
    }
  }
  while (i < mid) buf[k++] = y[i++];
  while (j < hi) buf[k++] = y[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, y.begin() + lo);
  return swaps;
}

std::uint64_t tie_pairs(const std::vector<double>& sorted) {
  std::uint64_t t = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const std::uint64_t run = j - i + 1;
    t += run * (run - 1) / 2;
    i = j + 1;
  }
  return t;
}

}  // namespace

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("kendall_tau: need paired n >= 2");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  // ties in x and joint ties, over the (x, y)-sorted order
  std::uint64_t n1 = 0, n3 = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
      const std::uint64_t run = j - i + 1;
      n1 += run * (run - 1) / 2;
      std::size_t a = i;
      while (a <= j) {
        std::size_t b = a;
        while (b + 1 <= j && y[idx[b + 1]] == y[idx[a]]) ++b;
        const std::uint64_t jr = b - a + 1;
        n3 += jr * (jr - 1) / 2;
        a = b + 1;
      }
      i = j + 1;
    }
  }

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  std::vector<double> buf(n);
  const std::uint64_t swaps = merge_count(ys, buf, 0, n);
  const std::uint64_t n2 = tie_pairs(ys);  // ys is now sorted

  if (n1 == n0 || n2 == n0) throw std::invalid_argument("kendall_tau: zero-variance column");

  const double num = static_cast<double>(n0) - static_cast<double>(n1) -
                     static_cast<double>(n2) + static_cast<double>(n3) -
                     2.0 * static_cast<double>(swaps);
  const double den = std::sqrt(static_cast<double>(n0 - n1)) *
                     std::sqrt(static_cast<double>(n0 - n2));
  return num / den;
}

double kendall_tau(const PseudoSample& s, std::size_t i, std::size_t j) {
  return kendall_tau(s.cols.at(i), s.cols.at(j));
}

std::vector<std::vector<double>> kendall_tau_matrix(const PseudoSample& s) {
  const std::size_t d = s.dim();
  std::vector<std::vector<double>> tau(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      tau[i][j] = tau[j][i] = kendall_tau(s, i, j);
    }
  }
  return tau;
}

ContingencyTable bin_to_table(const std::vector<double>& u, const std::vector<double>& v, int m) {
  if (m < 2) throw std::invalid_argument("bin_to_table: m >= 2 required");
  const std::size_t n = u.size();
  if (n == 0 || v.size() != n) throw std::invalid_argument("bin_to_table: bad sample");

  ContingencyTable t;
  t.m = m;
  t.a.assign(static_cast<std::size_t>(m) * m, 0.0);
  auto cell = [m](double z) {
    // z in ((k-1)/m, k/m]  =>  k = ceil(z*m); first cell takes z = 0 too
    int k = static_cast<int>(std::ceil(z * m)) - 1;
    return std::clamp(k, 0, m - 1);
  };
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.at(cell(u[i]), cell(v[i])) += w;
  }
  t.row_sums.assign(m, 0.0);
  t.col_sums.assign(m, 0.0);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      t.row_sums[k] += t.at(k, l);
      t.col_sums[l] += t.at(k, l);
    }
  }
  return t;
}

}  // namespace bvine
