#include "bvine/numerics.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace bvine::num {

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -HUGE_VAL;
    if (p == 1.0) return HUGE_VAL;
    throw std::domain_error("norm_quantile: p outside [0,1]");
  }
  // Acklam's rational approximation
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // one Halley step brings the result to full precision
  const double e = norm_cdf(x) - p;
  const double u = e / norm_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

namespace {

double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 3e-16, kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lbt = -lbeta(a, b) + a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(lbt);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * betacf(a, b, x) / a;
  }
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double t_pdf(double x, double nu) {
  const double lg = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                    0.5 * std::log(nu * M_PI) - 0.5 * (nu + 1.0) * std::log1p(x * x / nu);
  return std::exp(lg);
}

double t_cdf(double x, double nu) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double p = 0.5 * inc_beta(0.5 * nu, 0.5, nu / (nu + x * x));
  return x > 0.0 ? 1.0 - p : p;
}

double t_quantile(double p, double nu) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -HUGE_VAL;
    if (p == 1.0) return HUGE_VAL;
    throw std::domain_error("t_quantile: p outside [0,1]");
  }
  if (p == 0.5) return 0.0;
  const double pl = std::min(p, 1.0 - p);
  // initial guess: tail asymptotics for small pl, Cornish-Fisher otherwise
  double x0;
  if (pl < 0.05) {
    const double la = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * M_PI);
    // tail: P(T < -x) ~ A * nu^{(nu-1)/2} * x^{-nu} / nu with A=exp(la)
    const double lx = (la + 0.5 * (nu + 1.0) * std::log(nu) - std::log(nu) - std::log(pl)) / nu;
    x0 = std::exp(lx);
  } else {
    const double z = norm_quantile(1.0 - pl);
    x0 = z + (z * z * z + z) / (4.0 * nu) +
         (5.0 * z * z * z * z * z + 16.0 * z * z * z + 3.0 * z) / (96.0 * nu * nu);
  }
  if (x0 < 1e-8) x0 = 1e-8;
  // bracket the upper-tail quantile of 1 - pl
  double lo = 0.0, hi = x0;
  while (t_cdf(hi, nu) < 1.0 - pl) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  // safeguarded Newton on F(x) - (1 - pl)
  double x = std::min(std::max(x0, lo), hi);
  for (int it = 0; it < 100; ++it) {
    const double fx = t_cdf(x, nu) - (1.0 - pl);
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double dfx = t_pdf(x, nu);
    double xn = (dfx > 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 1e-14 * (1.0 + std::abs(x))) {
      x = xn;
      break;
    }
    x = xn;
  }
  return p < 0.5 ? -x : x;
}

double std_t_pdf(double z, double nu) {
  const double s = std::sqrt(nu / (nu - 2.0));
  return t_pdf(z * s, nu) * s;
}

double std_t_cdf(double z, double nu) { return t_cdf(z * std::sqrt(nu / (nu - 2.0)), nu); }

double std_t_quantile(double p, double nu) {
  return t_quantile(p, nu) * std::sqrt((nu - 2.0) / nu);
}

double bvn_cdf(double h, double k, double rho) {
  if (rho < -1.0 || rho > 1.0) throw std::domain_error("bvn_cdf: |rho| > 1");
  const double ph = norm_cdf(h), pk = norm_cdf(k);
  if (rho == 0.0) return ph * pk;
  if (rho >= 1.0) return std::min(ph, pk);
  if (rho <= -1.0) return std::max(0.0, ph + pk - 1.0);
  // Drezner-Wesolowsky identity:
  //   Phi2(h,k;rho) = Phi(h)Phi(k)
  //     + (1/2pi) * int_0^{asin(rho)} exp(-(h^2+k^2-2hk sin t)/(2 cos^2 t)) dt
  const double hk = h * k, hs = 0.5 * (h * h + k * k);
  auto integrand = [&](double t) {
    const double sn = std::sin(t);
    const double cs2 = 1.0 - sn * sn;
    return std::exp((sn * hk - hs) / cs2);
  };
  const double upper = std::asin(rho);
  double integral;
  if (std::abs(rho) <= 0.925) {
    const auto& [xs, ws] = gauss_legendre(48);
    const double c = 0.5 * upper, m = 0.5 * upper;
    integral = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) integral += ws[i] * integrand(m + c * xs[i]);
    integral *= c;
  } else {
    // near-singular for |rho| -> 1; adaptive rule keeps full accuracy
    integral = integrate(integrand, 0.0, upper, 1e-15);
  }
  double p = ph * pk + integral / (2.0 * M_PI);
  return clamp01(p);
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  auto [pos, ok] = cache.emplace(n, std::make_pair(std::move(x), std::move(w)));
  return pos->second;
}

}  // namespace bvine::num
