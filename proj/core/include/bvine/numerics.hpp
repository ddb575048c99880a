#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace bvine::num {

/// Copula arguments are clamped away from 0/1 before evaluation; several
/// families have boundary singularities.
inline constexpr double kUnitEps = 1e-10;

inline double clamp_unit(double u) {
  if (u < kUnitEps) return kUnitEps;
  if (u > 1.0 - kUnitEps) return 1.0 - kUnitEps;
  return u;
}

inline double clamp01(double u) {
  if (u < 0.0) return 0.0;
  if (u > 1.0) return 1.0;
  return u;
}

// ---------------------------------------------------------------------------
// Standard normal
// ---------------------------------------------------------------------------

inline double norm_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

/// Inverse standard normal cdf, full double precision (rational approximation
/// plus one Halley refinement).
double norm_quantile(double p);

// ---------------------------------------------------------------------------
// Beta / Student t
// ---------------------------------------------------------------------------

double lbeta(double a, double b);

/// Regularized incomplete beta function I_x(a, b).
double inc_beta(double a, double b, double x);

double t_pdf(double x, double nu);
double t_cdf(double x, double nu);
double t_quantile(double p, double nu);

/// Density and quantile of the unit-variance ("standardized") Student t,
/// i.e. the classical t scaled by sqrt((nu-2)/nu). Requires nu > 2.
double std_t_pdf(double z, double nu);
double std_t_cdf(double z, double nu);
double std_t_quantile(double p, double nu);

// ---------------------------------------------------------------------------
// Bivariate normal
// ---------------------------------------------------------------------------

/// Lower cdf P(X <= h, Y <= k) of a standard bivariate normal with
/// correlation rho.
double bvn_cdf(double h, double k, double rho);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on [-1, 1]; results are cached per n.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// Adaptive Simpson integration of f over [a, b].
template <typename F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 48) {
  struct Rec {
    static double step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
      }
      return step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// ---------------------------------------------------------------------------
// RNG
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Derive an independent stream from a master seed and a path of indices.
/// Used so that parallel work units get reproducible, order-independent
/// randomness.
inline Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = master ^ 0x9e3779b97f4a7c15ull;
  for (std::uint64_t p : path) {
    h ^= p + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
  }
  return Rng(h);
}

/// Uniform draw on (0,1); bit-reproducible across platforms.
inline double uniform01(Rng& rng) {
  // 53 random bits; result in [2^-53, 1 - 2^-53] after the shift below
  const std::uint64_t bits = rng() >> 11;
  double u = (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  return u;
}

}  // namespace bvine::num
