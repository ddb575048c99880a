#include "bvine/families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bvine/empirical.hpp"
#include "bvine/optimize.hpp"

namespace bvine {

using num::clamp_unit;

namespace {

enum class Rotation { None, Deg90, Deg180 };

struct BaseForm {
  FamilyId base;
  Rotation rot;
};

BaseForm decompose(FamilyId f) {
  switch (f) {
    case FamilyId::SurvivalClayton: return {FamilyId::Clayton, Rotation::Deg180};
    case FamilyId::SurvivalGumbel: return {FamilyId::Gumbel, Rotation::Deg180};
    case FamilyId::Clayton90: return {FamilyId::Clayton, Rotation::Deg90};
    case FamilyId::Gumbel90: return {FamilyId::Gumbel, Rotation::Deg90};
    default: return {f, Rotation::None};
  }
}

// ---- Clayton base (theta > 0) ----------------------------------------------

// log(u^-t + v^-t - 1), overflow-safe
double clayton_log_s(double theta, double lu, double lv) {
  const double a = -theta * lu, b = -theta * lv;  // both >= 0 for u,v in (0,1)
  const double m = std::max(a, b);
  if (m < 30.0) return std::log1p(std::expm1(a) + std::expm1(b));
  return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
}

double clayton_cdf(double theta, double u, double v) {
  const double ls = clayton_log_s(theta, std::log(u), std::log(v));
  return std::exp(-ls / theta);
}

double clayton_log_density(double theta, double u, double v) {
  const double lu = std::log(u), lv = std::log(v);
  const double ls = clayton_log_s(theta, lu, lv);
  return std::log1p(theta) - (theta + 1.0) * (lu + lv) - (1.0 / theta + 2.0) * ls;
}

double clayton_h1(double theta, double v, double u) {
  const double lu = std::log(u);
  const double ls = clayton_log_s(theta, lu, std::log(v));
  return std::exp(-(theta + 1.0) * lu - (1.0 / theta + 1.0) * ls);
}

double clayton_h1_inv(double theta, double w, double u) {
  // v = (u^-t (w^{-t/(t+1)} - 1) + 1)^{-1/t}
  const double lu = std::log(u);
  const double q = -theta / (theta + 1.0) * std::log(w);  // >= 0
  const double lterm = -theta * lu + std::log(std::expm1(q));
  double log_inner;
  if (lterm > 30.0) {
    log_inner = lterm;
  } else {
    log_inner = std::log1p(std::exp(lterm));
  }
  return std::exp(-log_inner / theta);
}

// ---- Gumbel base (theta >= 1) ----------------------------------------------

struct GumbelParts {
  double llu, llv;  // log(-log u), log(-log v)
  double log_s;     // log((-log u)^t + (-log v)^t)
  double s_pow;     // S^{1/t}
};

GumbelParts gumbel_parts(double theta, double u, double v) {
  GumbelParts p;
  p.llu = std::log(-std::log(u));
  p.llv = std::log(-std::log(v));
  const double lx = theta * p.llu, ly = theta * p.llv;
  const double m = std::max(lx, ly);
  p.log_s = m + std::log(std::exp(lx - m) + std::exp(ly - m));
  p.s_pow = std::exp(p.log_s / theta);
  return p;
}

double gumbel_cdf(double theta, double u, double v) {
  return std::exp(-gumbel_parts(theta, u, v).s_pow);
}

double gumbel_log_density(double theta, double u, double v) {
  const auto p = gumbel_parts(theta, u, v);
  return -p.s_pow + (theta - 1.0) * (p.llu + p.llv) - std::log(u) - std::log(v) +
         (2.0 / theta - 2.0) * p.log_s + std::log1p((theta - 1.0) * std::exp(-p.log_s / theta));
}

double gumbel_log_h1(double theta, double v, double u) {
  const auto p = gumbel_parts(theta, u, v);
  return -p.s_pow + (theta - 1.0) * p.llu + (1.0 / theta - 1.0) * p.log_s - std::log(u);
}

double gumbel_h1(double theta, double v, double u) { return std::exp(gumbel_log_h1(theta, v, u)); }

double gumbel_h1_inv(double theta, double w, double u) {
  auto f = [&](double v) { return gumbel_h1(theta, v, u); };
  auto df = [&](double v) { return std::exp(gumbel_log_density(theta, u, v)); };
  auto r = opt::monotone_root(f, df, w, num::kUnitEps, 1.0 - num::kUnitEps, 1e-10, 1e-3, 200);
  if (!r.converged) throw std::runtime_error("gumbel h-inverse: root-finder failed to converge");
  return r.x;
}

// ---- Gaussian base (|rho| < 1) ---------------------------------------------

double gauss_log_density(double rho, double x, double y) {
  const double r2 = rho * rho, d = 1.0 - r2;
  return -0.5 * std::log(d) - (r2 * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * d);
}

// ---- Student t base --------------------------------------------------------

double t_log_density(double rho, double nu, double x, double y) {
  const double d = 1.0 - rho * rho;
  const double q = (x * x - 2.0 * rho * x * y + y * y) / (nu * d);
  return std::lgamma(0.5 * nu + 1.0) + std::lgamma(0.5 * nu) -
         2.0 * std::lgamma(0.5 * (nu + 1.0)) - 0.5 * std::log(d) -
         0.5 * (nu + 2.0) * std::log1p(q) +
         0.5 * (nu + 1.0) * (std::log1p(x * x / nu) + std::log1p(y * y / nu));
}

double t_h1_from_scores(double rho, double nu, double y, double x) {
  const double s = std::sqrt((nu + x * x) * (1.0 - rho * rho) / (nu + 1.0));
  return num::t_cdf((y - rho * x) / s, nu + 1.0);
}

// base evaluators dispatch -----------------------------------------------------

double base_cdf(FamilyId base, double theta, double nu, double u, double v) {
  switch (base) {
    case FamilyId::Independence: return u * v;
    case FamilyId::Clayton: return clayton_cdf(theta, u, v);
    case FamilyId::Gumbel: return gumbel_cdf(theta, u, v);
    case FamilyId::Gaussian:
      return num::bvn_cdf(num::norm_quantile(u), num::norm_quantile(v), theta);
    case FamilyId::StudentT: {
      // integrate h along the smaller coordinate; the pair is exchangeable
      const double a = std::min(u, v), b = std::max(u, v);
      const double yb = num::t_quantile(b, nu);
      auto f = [&](double s) {
        return t_h1_from_scores(theta, nu, yb, num::t_quantile(clamp_unit(s), nu));
      };
      return num::clamp01(num::integrate(f, 0.0, a, 1e-11));
    }
    default: throw std::logic_error("base_cdf: not a base family");
  }
}

double base_log_density(FamilyId base, double theta, double nu, double u, double v) {
  switch (base) {
    case FamilyId::Independence: return 0.0;
    case FamilyId::Clayton: return clayton_log_density(theta, u, v);
    case FamilyId::Gumbel: return gumbel_log_density(theta, u, v);
    case FamilyId::Gaussian:
      return gauss_log_density(theta, num::norm_quantile(u), num::norm_quantile(v));
    case FamilyId::StudentT:
      return t_log_density(theta, nu, num::t_quantile(u, nu), num::t_quantile(v, nu));
    default: throw std::logic_error("base_log_density: not a base family");
  }
}

double base_h1(FamilyId base, double theta, double nu, double v, double u) {
  switch (base) {
    case FamilyId::Independence: return v;
    case FamilyId::Clayton: return clayton_h1(theta, v, u);
    case FamilyId::Gumbel: return gumbel_h1(theta, v, u);
    case FamilyId::Gaussian: {
      const double x = num::norm_quantile(u), y = num::norm_quantile(v);
      return num::norm_cdf((y - theta * x) / std::sqrt(1.0 - theta * theta));
    }
    case FamilyId::StudentT:
      return t_h1_from_scores(theta, nu, num::t_quantile(v, nu), num::t_quantile(u, nu));
    default: throw std::logic_error("base_h1: not a base family");
  }
}

double base_h1_inv(FamilyId base, double theta, double nu, double w, double u) {
  switch (base) {
    case FamilyId::Independence: return w;
    case FamilyId::Clayton: return clayton_h1_inv(theta, w, u);
    case FamilyId::Gumbel: return gumbel_h1_inv(theta, w, u);
    case FamilyId::Gaussian: {
      const double x = num::norm_quantile(u);
      return num::norm_cdf(num::norm_quantile(w) * std::sqrt(1.0 - theta * theta) + theta * x);
    }
    case FamilyId::StudentT: {
      const double x = num::t_quantile(u, nu);
      const double s = std::sqrt((nu + x * x) * (1.0 - theta * theta) / (nu + 1.0));
      const double y = num::t_quantile(w, nu + 1.0) * s + theta * x;
      return num::t_cdf(y, nu);
    }
    default: throw std::logic_error("base_h1_inv: not a base family");
  }
}

double base_theta(const ParametricPairCopula& c) {
  const auto bf = decompose(c.family);
  return bf.rot == Rotation::Deg90 ? -c.theta : c.theta;
}

}  // namespace

const char* family_name(FamilyId f) {
  switch (f) {
    case FamilyId::Independence: return "independence";
    case FamilyId::Gaussian: return "gaussian";
    case FamilyId::StudentT: return "studentt";
    case FamilyId::Clayton: return "clayton";
    case FamilyId::Gumbel: return "gumbel";
    case FamilyId::SurvivalClayton: return "survival-clayton";
    case FamilyId::SurvivalGumbel: return "survival-gumbel";
    case FamilyId::Clayton90: return "clayton90";
    case FamilyId::Gumbel90: return "gumbel90";
  }
  return "?";
}

FamilyId family_from_name(const std::string& name) {
  for (FamilyId f :
       {FamilyId::Independence, FamilyId::Gaussian, FamilyId::StudentT, FamilyId::Clayton,
        FamilyId::Gumbel, FamilyId::SurvivalClayton, FamilyId::SurvivalGumbel, FamilyId::Clayton90,
        FamilyId::Gumbel90}) {
    if (name == family_name(f)) return f;
  }
  throw std::invalid_argument("unknown copula family: " + name);
}

const std::array<FamilyId, 8>& candidate_families() {
  static const std::array<FamilyId, 8> fams = {
      FamilyId::Gaussian,        FamilyId::StudentT,       FamilyId::Clayton,
      FamilyId::Gumbel,          FamilyId::SurvivalClayton, FamilyId::SurvivalGumbel,
      FamilyId::Clayton90,       FamilyId::Gumbel90,
  };
  return fams;
}

ParameterDomain parameter_domain(FamilyId f) {
  // Archimedean caps chosen so tau stays below ~0.94; far beyond anything a
  // clean fit needs, close enough that degenerate data pins the optimizer.
  constexpr double kRhoMax = 0.9999;
  constexpr double kClaytonMax = 28.0;
  constexpr double kGumbelMax = 17.0;
  switch (f) {
    case FamilyId::Independence: return {0.0, 0.0, false, false};
    case FamilyId::Gaussian:
    case FamilyId::StudentT: return {-kRhoMax, kRhoMax, true, true};
    case FamilyId::Clayton:
    case FamilyId::SurvivalClayton: return {1e-10, kClaytonMax, false, true};
    case FamilyId::Gumbel:
    case FamilyId::SurvivalGumbel: return {1.0, kGumbelMax, false, true};
    case FamilyId::Clayton90: return {-kClaytonMax, -1e-10, true, false};
    case FamilyId::Gumbel90: return {-kGumbelMax, -1.0, true, false};
  }
  return {};
}

void ParametricPairCopula::validate() const {
  const auto dom = parameter_domain(family);
  if (family == FamilyId::Independence) return;
  if (!(theta >= dom.lo && theta <= dom.hi)) {
    throw std::invalid_argument(std::string("parameter outside admissible domain for ") +
                                family_name(family));
  }
  if (family == FamilyId::StudentT) {
    if (!(nu > 2.0)) throw std::invalid_argument("StudentT requires nu > 2");
  }
}

double cdf(const ParametricPairCopula& c, double u, double v) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0 && v >= 1.0) return 1.0;
  if (v >= 1.0) return u;
  if (u >= 1.0) return v;
  u = clamp_unit(u);
  v = clamp_unit(v);
  const auto bf = decompose(c.family);
  const double th = base_theta(c);
  switch (bf.rot) {
    case Rotation::None: return base_cdf(bf.base, th, c.nu, u, v);
    case Rotation::Deg90: return v - base_cdf(bf.base, th, c.nu, 1.0 - u, v);
    case Rotation::Deg180:
      return u + v - 1.0 + base_cdf(bf.base, th, c.nu, 1.0 - u, 1.0 - v);
  }
  return 0.0;
}

double log_density(const ParametricPairCopula& c, double u, double v) {
  u = clamp_unit(u);
  v = clamp_unit(v);
  const auto bf = decompose(c.family);
  const double th = base_theta(c);
  switch (bf.rot) {
    case Rotation::None: return base_log_density(bf.base, th, c.nu, u, v);
    case Rotation::Deg90: return base_log_density(bf.base, th, c.nu, 1.0 - u, v);
    case Rotation::Deg180: return base_log_density(bf.base, th, c.nu, 1.0 - u, 1.0 - v);
  }
  return 0.0;
}

double density(const ParametricPairCopula& c, double u, double v) {
  return std::exp(log_density(c, u, v));
}

double h1(const ParametricPairCopula& c, double v, double u) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  u = clamp_unit(u);
  v = clamp_unit(v);
  const auto bf = decompose(c.family);
  const double th = base_theta(c);
  switch (bf.rot) {
    case Rotation::None: return base_h1(bf.base, th, c.nu, v, u);
    case Rotation::Deg90: return base_h1(bf.base, th, c.nu, v, 1.0 - u);
    case Rotation::Deg180: return 1.0 - base_h1(bf.base, th, c.nu, 1.0 - v, 1.0 - u);
  }
  return v;
}

double h2(const ParametricPairCopula& c, double u, double v) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  u = clamp_unit(u);
  v = clamp_unit(v);
  const auto bf = decompose(c.family);
  const double th = base_theta(c);
  // the base families are exchangeable, so their h2 is h1 with roles swapped
  switch (bf.rot) {
    case Rotation::None: return base_h1(bf.base, th, c.nu, u, v);
    case Rotation::Deg90: return 1.0 - base_h1(bf.base, th, c.nu, 1.0 - u, v);
    case Rotation::Deg180: return 1.0 - base_h1(bf.base, th, c.nu, 1.0 - u, 1.0 - v);
  }
  return u;
}

double h1_inverse(const ParametricPairCopula& c, double w, double u) {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  u = clamp_unit(u);
  w = clamp_unit(w);
  const auto bf = decompose(c.family);
  const double th = base_theta(c);
  switch (bf.rot) {
    case Rotation::None: return base_h1_inv(bf.base, th, c.nu, w, u);
    case Rotation::Deg90: return base_h1_inv(bf.base, th, c.nu, w, 1.0 - u);
    case Rotation::Deg180: return 1.0 - base_h1_inv(bf.base, th, c.nu, 1.0 - w, 1.0 - u);
  }
  return w;
}

double h2_inverse(const ParametricPairCopula& c, double w, double v) {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  v = clamp_unit(v);
  w = clamp_unit(w);
  const auto bf = decompose(c.family);
  const double th = base_theta(c);
  switch (bf.rot) {
    case Rotation::None: return base_h1_inv(bf.base, th, c.nu, w, v);
    case Rotation::Deg90: return 1.0 - base_h1_inv(bf.base, th, c.nu, 1.0 - w, v);
    case Rotation::Deg180: return 1.0 - base_h1_inv(bf.base, th, c.nu, 1.0 - w, 1.0 - v);
  }
  return w;
}

std::vector<std::array<double, 2>> sample(const ParametricPairCopula& c, std::size_t n,
                                          num::Rng& rng) {
  std::vector<std::array<double, 2>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = num::uniform01(rng);
    const double w = num::uniform01(rng);
    out.push_back({u, h1_inverse(c, w, u)});
  }
  return out;
}

double kendall_tau(const ParametricPairCopula& c) {
  const auto bf = decompose(c.family);
  const double th = base_theta(c);
  double tau;
  switch (bf.base) {
    case FamilyId::Independence: return 0.0;
    case FamilyId::Gaussian:
    case FamilyId::StudentT: tau = 2.0 / M_PI * std::asin(th); break;
    case FamilyId::Clayton: tau = th / (th + 2.0); break;
    case FamilyId::Gumbel: tau = 1.0 - 1.0 / th; break;
    default: return 0.0;
  }
  return bf.rot == Rotation::Deg90 ? -tau : tau;
}

double theta_from_tau(FamilyId f, double tau) {
  const auto bf = decompose(f);
  double t = bf.rot == Rotation::Deg90 ? -tau : tau;
  double theta;
  switch (bf.base) {
    case FamilyId::Independence: return 0.0;
    case FamilyId::Gaussian:
    case FamilyId::StudentT: theta = std::sin(0.5 * M_PI * t); break;
    case FamilyId::Clayton: theta = 2.0 * std::max(t, 1e-10) / (1.0 - std::min(t, 0.999)); break;
    case FamilyId::Gumbel: theta = 1.0 / (1.0 - std::clamp(t, 0.0, 0.999)); break;
    default: theta = 0.0;
  }
  const auto dom = parameter_domain(f);
  if (bf.rot == Rotation::Deg90) theta = -theta;
  return std::clamp(theta, dom.lo, dom.hi);
}

std::array<double, 2> tau_range(FamilyId f) {
  const auto dom = parameter_domain(f);
  ParametricPairCopula lo{f, dom.lo, 5.0}, hi{f, dom.hi, 5.0};
  double a = kendall_tau(lo), b = kendall_tau(hi);
  if (a > b) std::swap(a, b);
  return {a, b};
}

// ---------------------------------------------------------------------------
// Maximum likelihood
// ---------------------------------------------------------------------------

namespace {

constexpr double kPenalty = 1e100;

struct ScalarFit {
  double theta = 0.0;
  double nll = kPenalty;
  int iterations = 0;
  bool brent_converged = false;
};

// Brent on [lo0, hi0], expanding toward the family domain when the optimum
// sits on a bracket edge that is not a domain bound.
ScalarFit brent_with_expansion(const std::function<double(double)>& nll, double lo0, double hi0,
                               const ParameterDomain& dom) {
  double lo = std::max(lo0, dom.lo), hi = std::min(hi0, dom.hi);
  if (!(hi > lo)) {
    lo = dom.lo;
    hi = dom.hi;
  }
  ScalarFit fit;
  for (int round = 0; round < 3; ++round) {
    auto r = opt::brent_minimize(nll, lo, hi, 1e-8, 150);
    fit.theta = r.x;
    fit.nll = r.fx;
    fit.iterations += r.iterations;
    fit.brent_converged = r.converged;
    const double span = hi - lo;
    const bool at_lo = (r.x - lo) < 0.02 * span && lo > dom.lo + 1e-12;
    const bool at_hi = (hi - r.x) < 0.02 * span && hi < dom.hi - 1e-12;
    if (!at_lo && !at_hi) break;
    if (at_lo) lo = std::max(dom.lo, lo - 2.0 * span);
    if (at_hi) hi = std::min(dom.hi, hi + 2.0 * span);
  }
  return fit;
}

// does the likelihood keep improving toward the domain bound theta sits on?
bool pinned_diverging(const std::function<double(double)>& nll, double theta,
                      const ParameterDomain& dom) {
  const double span = dom.hi - dom.lo;
  const double edge_tol = 1e-7 * std::max(1.0, span);
  const double step = 1e-4 * std::max(1.0, span);
  if (dom.divergent_hi && theta >= dom.hi - edge_tol) {
    return nll(dom.hi) <= nll(dom.hi - step);
  }
  if (dom.divergent_lo && theta <= dom.lo + edge_tol) {
    return nll(dom.lo) <= nll(dom.lo + step);
  }
  return false;
}

}  // namespace

PairFitResult fit_ml(FamilyId f, const std::vector<double>& u, const std::vector<double>& v) {
  const std::size_t n = u.size();
  if (n != v.size()) throw std::invalid_argument("fit_ml: length mismatch");
  if (n < 10) throw std::invalid_argument("fit_ml: need at least 10 observations");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(u[i] > 0.0 && u[i] < 1.0 && v[i] > 0.0 && v[i] < 1.0)) {
      throw std::invalid_argument("fit_ml: observations must lie strictly inside (0,1)^2");
    }
  }

  PairFitResult out;
  if (f == FamilyId::Independence) {
    out.copula = {FamilyId::Independence, 0.0, 0.0};
    out.loglik = 0.0;
    out.aic = 0.0;
    out.n_params = 0;
    out.converged = true;
    return out;
  }

  // fold the rotation into the data; the base family is fitted throughout
  const auto bf = decompose(f);
  std::vector<double> ub(n), vb(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (bf.rot) {
      case Rotation::None: ub[i] = u[i]; vb[i] = v[i]; break;
      case Rotation::Deg90: ub[i] = 1.0 - u[i]; vb[i] = v[i]; break;
      case Rotation::Deg180: ub[i] = 1.0 - u[i]; vb[i] = 1.0 - v[i]; break;
    }
    ub[i] = clamp_unit(ub[i]);
    vb[i] = clamp_unit(vb[i]);
  }
  const double tau_hat = kendall_tau(ub, vb);
  const ParameterDomain dom = parameter_domain(bf.base);
  const auto trange = tau_range(bf.base);

  auto bracket_from_tau = [&](double pad) {
    const double tlo = std::clamp(tau_hat - pad, trange[0], trange[1]);
    const double thi = std::clamp(tau_hat + pad, trange[0], trange[1]);
    double a = theta_from_tau(bf.base, tlo);
    double b = theta_from_tau(bf.base, thi);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6 * std::max(1.0, dom.hi - dom.lo)) {
      // degenerate bracket (tau pinned at a range edge); widen a little
      a = std::max(dom.lo, a - 0.05 * (dom.hi - dom.lo));
      b = std::min(dom.hi, b + 0.05 * (dom.hi - dom.lo));
    }
    return std::array<double, 2>{a, b};
  };

  if (bf.base == FamilyId::StudentT) {
    // profile likelihood over nu; per nu the data is transformed to t scores
    // once and the correlation optimized by Brent
    std::vector<double> grid = {2.5};
    for (int k = 3; k <= 30; ++k) grid.push_back(k);

    auto profile = [&](double nu, ScalarFit* fit_out) {
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = num::t_quantile(ub[i], nu);
        y[i] = num::t_quantile(vb[i], nu);
      }
      auto nll = [&](double rho) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s -= t_log_density(rho, nu, x[i], y[i]);
        return std::isfinite(s) ? s : kPenalty;
      };
      const auto br = bracket_from_tau(0.35);
      auto fit = brent_with_expansion(nll, br[0], br[1], dom);
      if (fit_out) {
        *fit_out = fit;
        if (pinned_diverging(nll, fit.theta, dom)) fit_out->brent_converged = false;
      }
      return fit;
    };

    double best_nu = grid[0];
    ScalarFit best;
    std::size_t best_idx = 0;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      auto fit = profile(grid[gi], nullptr);
      if (fit.nll < best.nll) {
        best = fit;
        best_nu = grid[gi];
        best_idx = gi;
      }
    }
    // derivative-free refinement between the neighbouring grid points; nu
    // precision far below its statistical uncertainty is wasted work
    const double nlo = grid[best_idx == 0 ? 0 : best_idx - 1];
    const double nhi = grid[std::min(best_idx + 1, grid.size() - 1)];
    if (nhi > nlo) {
      auto obj = [&](double nu) { return profile(nu, nullptr).nll; };
      auto r = opt::brent_minimize(obj, nlo, nhi, 5e-3, 12);
      if (r.fx < best.nll) {
        best_nu = r.x;
      }
    }
    ScalarFit fin;
    profile(best_nu, &fin);
    out.copula = {FamilyId::StudentT, fin.theta, best_nu};
    out.loglik = -fin.nll;
    out.n_params = 2;
    out.iterations = fin.iterations;
    out.converged = fin.brent_converged && std::isfinite(out.loglik);
    if (!fin.brent_converged) out.note = "correlation optimizer pinned or hit iteration cap";
    if (!std::isfinite(out.loglik)) out.note = "non-finite log-likelihood";
  } else {
    // one-parameter families
    std::function<double(double)> nll;
    if (bf.base == FamilyId::Gaussian) {
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = num::norm_quantile(ub[i]);
        y[i] = num::norm_quantile(vb[i]);
      }
      nll = [&, x, y](double rho) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s -= gauss_log_density(rho, x[i], y[i]);
        return std::isfinite(s) ? s : kPenalty;
      };
    } else if (bf.base == FamilyId::Clayton) {
      nll = [&](double theta) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s -= clayton_log_density(theta, ub[i], vb[i]);
        return std::isfinite(s) ? s : kPenalty;
      };
    } else {  // Gumbel
      nll = [&](double theta) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s -= gumbel_log_density(theta, ub[i], vb[i]);
        return std::isfinite(s) ? s : kPenalty;
      };
    }
    const auto br = bracket_from_tau(0.35);
    auto fit = brent_with_expansion(nll, br[0], br[1], dom);
    bool pinned = pinned_diverging(nll, fit.theta, dom);

    double theta = fit.theta;
    if (bf.rot == Rotation::Deg90) theta = -theta;
    out.copula = {f, theta, 0.0};
    out.loglik = -fit.nll;
    out.n_params = 1;
    out.iterations = fit.iterations;
    out.converged = fit.brent_converged && !pinned && std::isfinite(out.loglik);
    if (pinned) out.note = "estimate pinned at a degenerate parameter bound";
    else if (!fit.brent_converged) out.note = "Brent hit its iteration cap";
    else if (!std::isfinite(out.loglik)) out.note = "non-finite log-likelihood";
  }
  out.aic = -2.0 * out.loglik + 2.0 * out.n_params;
  if (!std::isfinite(out.aic)) {
    out.converged = false;
    if (out.note.empty()) out.note = "non-finite AIC";
  }
  return out;
}

}  // namespace bvine
