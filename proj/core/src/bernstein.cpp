#include "bvine/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bvine/optimize.hpp"

namespace bvine {

using num::clamp01;

namespace {

std::vector<double> binomial_row(int m) {
  std::vector<double> c(m + 1);
  c[0] = 1.0;
  for (int k = 1; k <= m; ++k) c[k] = c[k - 1] * (m - k + 1) / k;
  return c;
}

}  // namespace

double bernstein_basis(int m, int k, double z) {
  if (k < 0 || k > m) throw std::invalid_argument("bernstein_basis: k out of range");
  if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("bernstein_basis: z outside [0,1]");
  if (z == 0.0) return k == 0 ? 1.0 : 0.0;
  if (z == 1.0) return k == m ? 1.0 : 0.0;
  if (m <= 100) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (m - i + 1) / i;
    return c * std::pow(z, k) * std::pow(1.0 - z, m - k);
  }
  const double lb = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) +
                    k * std::log(z) + (m - k) * std::log1p(-z);
  return std::exp(lb);
}

BernsteinCopula::BernsteinCopula(int m, std::vector<double> weights) : m_(m), p_(std::move(weights)) {
  if (m < 1) throw std::invalid_argument("BernsteinCopula: m >= 1 required");
  if (p_.size() != static_cast<std::size_t>(m) * m) {
    throw std::invalid_argument("BernsteinCopula: weight grid must be m x m");
  }
  const double margin = 1.0 / m;
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    double rs = 0.0, cs = 0.0;
    for (int l = 0; l < m; ++l) {
      const double w = weight(k, l);
      if (w < -1e-9) throw std::invalid_argument("BernsteinCopula: negative weight");
      rs += w;
      cs += p_[static_cast<std::size_t>(l) * m + k];
    }
    if (std::abs(rs - margin) > 1e-6 || std::abs(cs - margin) > 1e-6) {
      throw std::invalid_argument("BernsteinCopula: margins must be uniform 1/m");
    }
    total += rs;
  }
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("BernsteinCopula: weights must sum to 1");
  for (double& w : p_) w = std::max(w, 0.0);

  cum_.assign(static_cast<std::size_t>(m + 1) * (m + 1), 0.0);
  for (int k = 1; k <= m; ++k) {
    for (int l = 1; l <= m; ++l) {
      cum_[k * (m + 1) + l] = weight(k - 1, l - 1) + cum_[(k - 1) * (m + 1) + l] +
                              cum_[k * (m + 1) + (l - 1)] - cum_[(k - 1) * (m + 1) + (l - 1)];
    }
  }
  row_pref_.assign(static_cast<std::size_t>(m) * (m + 1), 0.0);
  col_pref_.assign(static_cast<std::size_t>(m) * (m + 1), 0.0);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      row_pref_[k * (m + 1) + l + 1] = row_pref_[k * (m + 1) + l] + weight(k, l);
      col_pref_[l * (m + 1) + k + 1] = col_pref_[l * (m + 1) + k] + weight(k, l);
    }
  }
  // col_pref_ is indexed [l][k+1] = sum_{i<=k} p[i][l]; rebuild as [l][i]
  cell_cdf_.resize(p_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    acc += p_[i];
    cell_cdf_[i] = acc;
  }
  binom_m_ = binomial_row(m);
  binom_m1_ = m >= 1 ? binomial_row(m - 1) : std::vector<double>{1.0};
}

std::vector<double> BernsteinCopula::basis_row(int degree, double z) const {
  const auto& binom = degree == m_ ? binom_m_ : binom_m1_;
  std::vector<double> out(degree + 1);
  if (z <= 0.0) {
    out.assign(degree + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  if (z >= 1.0) {
    out.assign(degree + 1, 0.0);
    out[degree] = 1.0;
    return out;
  }
  // incremental powers keep this O(degree) without pow() calls
  std::vector<double> zp(degree + 1), qp(degree + 1);
  zp[0] = 1.0;
  qp[0] = 1.0;
  const double q = 1.0 - z;
  for (int k = 1; k <= degree; ++k) {
    zp[k] = zp[k - 1] * z;
    qp[k] = qp[k - 1] * q;
  }
  for (int k = 0; k <= degree; ++k) out[k] = binom[k] * zp[k] * qp[degree - k];
  return out;
}

double BernsteinCopula::density(double u, double v) const {
  u = clamp01(u);
  v = clamp01(v);
  if (m_ == 1) return 1.0;
  const auto bu = basis_row(m_ - 1, u);
  const auto bv = basis_row(m_ - 1, v);
  double s = 0.0;
  for (int k = 0; k < m_; ++k) {
    double inner = 0.0;
    const double* row = &p_[static_cast<std::size_t>(k) * m_];
    for (int l = 0; l < m_; ++l) inner += row[l] * bv[l];
    s += bu[k] * inner;
  }
  return s * m_ * m_;
}

double BernsteinCopula::cdf(double u, double v) const {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0 && v >= 1.0) return 1.0;
  u = clamp01(u);
  v = clamp01(v);
  const auto bu = basis_row(m_, u);
  const auto bv = basis_row(m_, v);
  double s = 0.0;
  for (int k = 0; k <= m_; ++k) {
    if (bu[k] == 0.0) continue;
    double inner = 0.0;
    const double* row = &cum_[static_cast<std::size_t>(k) * (m_ + 1)];
    for (int l = 0; l <= m_; ++l) inner += row[l] * bv[l];
    s += bu[k] * inner;
  }
  return clamp01(s);
}

double BernsteinCopula::h1(double v, double u) const {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  u = clamp01(u);
  v = clamp01(v);
  const auto bu = basis_row(m_ - 1, u);
  const auto bv = basis_row(m_, v);
  double s = 0.0;
  for (int k = 0; k < m_; ++k) {
    if (bu[k] == 0.0) continue;
    double inner = 0.0;
    const double* pref = &row_pref_[static_cast<std::size_t>(k) * (m_ + 1)];
    for (int l = 0; l <= m_; ++l) inner += pref[l] * bv[l];
    s += bu[k] * inner;
  }
  return clamp01(s * m_);
}

double BernsteinCopula::h2(double u, double v) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  u = clamp01(u);
  v = clamp01(v);
  const auto bv = basis_row(m_ - 1, v);
  const auto bu = basis_row(m_, u);
  double s = 0.0;
  for (int l = 0; l < m_; ++l) {
    if (bv[l] == 0.0) continue;
    double inner = 0.0;
    const double* pref = &col_pref_[static_cast<std::size_t>(l) * (m_ + 1)];
    for (int k = 0; k <= m_; ++k) inner += pref[k] * bu[k];
    s += bv[l] * inner;
  }
  return clamp01(s * m_);
}

double BernsteinCopula::h1_inverse(double w, double u) const {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  auto f = [&](double v) { return h1(v, u); };
  auto df = [&](double v) { return density(u, v); };
  auto r = opt::monotone_root(f, df, w, 0.0, 1.0, 1e-9, 1e-3, 200);
  if (!r.converged) {
    throw std::runtime_error("BernsteinCopula::h1_inverse: root-finder failed to converge");
  }
  return r.x;
}

double BernsteinCopula::h2_inverse(double w, double v) const {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  auto f = [&](double u) { return h2(u, v); };
  auto df = [&](double u) { return density(u, v); };
  auto r = opt::monotone_root(f, df, w, 0.0, 1.0, 1e-9, 1e-3, 200);
  if (!r.converged) {
    throw std::runtime_error("BernsteinCopula::h2_inverse: root-finder failed to converge");
  }
  return r.x;
}

std::vector<std::array<double, 2>> BernsteinCopula::sample(std::size_t n, num::Rng& rng) const {
  std::vector<std::array<double, 2>> out;
  out.reserve(n);
  auto beta_draw = [&](int a, int b) {
    std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
    const double x = ga(rng), y = gb(rng);
    return clamp01(x / (x + y));
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double r = num::uniform01(rng) * cell_cdf_.back();
    const auto it = std::upper_bound(cell_cdf_.begin(), cell_cdf_.end(), r);
    const std::size_t cell = std::min<std::size_t>(it - cell_cdf_.begin(), p_.size() - 1);
    const int k = static_cast<int>(cell) / m_;
    const int l = static_cast<int>(cell) % m_;
    out.push_back({beta_draw(k + 1, m_ - k), beta_draw(l + 1, m_ - l)});
  }
  return out;
}

BernsteinCopula fit_bernstein(const std::vector<double>& u, const std::vector<double>& v, int m,
                              BernsteinFitInfo* info) {
  const std::size_t n = u.size();
  if (n < static_cast<std::size_t>(m)) {
    throw std::invalid_argument("fit_bernstein: need n >= m observations");
  }
  const auto table = bin_to_table(u, v, m);
  const auto proj = qp_project(table);
  if (info) {
    info->qp_objective = proj.objective;
    info->qp_iterations = proj.iterations;
    info->qp_active_set = proj.active_set_size;
    info->small_sample = n < static_cast<std::size_t>(5) * m * m;
  }
  return BernsteinCopula(m, proj.x);
}

int bernstein_default_grid(std::size_t n) {
  const int m = static_cast<int>(std::llround(std::cbrt(static_cast<double>(n))));
  return std::max(4, m);
}

}  // namespace bvine
