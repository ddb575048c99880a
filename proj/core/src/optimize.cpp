#include "bvine/optimize.hpp"

#include <algorithm>
#include <limits>

namespace bvine::opt {

ScalarResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                            double tol, int max_iter) {
  const double golden = 0.3819660112501051;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  ScalarResult out;
  for (int iter = 0; iter < max_iter; ++iter) {
    out.iterations = iter + 1;
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
      out.converged = true;
      break;
    }
    double u;
    bool parabolic = false;
    if (std::abs(e) > tol1) {
      // parabolic fit through x, v, w
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  out.x = x;
  out.fx = fx;
  return out;
}

VectorResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x0, const NelderMeadOptions& opts) {
  const size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fvals(n + 1);
  for (size_t i = 0; i < n; ++i) {
    double step = opts.initial_step * std::max(1.0, std::abs(x0[i]));
    simplex[i + 1][i] += step;
  }
  for (size_t i = 0; i <= n; ++i) fvals[i] = f(simplex[i]);

  VectorResult out;
  auto order = [&]() {
    std::vector<size_t> idx(n + 1);
    for (size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return fvals[a] < fvals[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (size_t i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      f2[i] = fvals[idx[i]];
    }
    simplex = std::move(s2);
    fvals = std::move(f2);
  };

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    order();
    // convergence: spread of f and simplex diameter
    double fspread = std::abs(fvals[n] - fvals[0]);
    double diam = 0.0;
    for (size_t i = 0; i < n; ++i)
      diam = std::max(diam, std::abs(simplex[n][i] - simplex[0][i]));
    if (fspread < opts.f_tol * (1.0 + std::abs(fvals[0])) && diam < opts.x_tol) {
      out.converged = true;
      break;
    }
    // centroid of all but worst
    std::vector<double> c(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) c[j] += simplex[i][j];
    }
    for (size_t j = 0; j < n; ++j) c[j] /= static_cast<double>(n);

    auto point = [&](double coef) {
      std::vector<double> p(n);
      for (size_t j = 0; j < n; ++j) p[j] = c[j] + coef * (simplex[n][j] - c[j]);
      return p;
    };
    auto xr = point(-1.0);
    double fr = f(xr);
    if (fr < fvals[0]) {
      auto xe = point(-2.0);
      double fe = f(xe);
      if (fe < fr) {
        simplex[n] = std::move(xe);
        fvals[n] = fe;
      } else {
        simplex[n] = std::move(xr);
        fvals[n] = fr;
      }
    } else if (fr < fvals[n - 1]) {
      simplex[n] = std::move(xr);
      fvals[n] = fr;
    } else {
      auto xc = point(fr < fvals[n] ? -0.5 : 0.5);
      double fc = f(xc);
      if (fc < std::min(fr, fvals[n])) {
        simplex[n] = std::move(xc);
        fvals[n] = fc;
      } else {
        // shrink toward best
        for (size_t i = 1; i <= n; ++i) {
          for (size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          fvals[i] = f(simplex[i]);
        }
      }
    }
  }
  order();
  out.iterations = iter;
  out.x = simplex[0];
  out.fx = fvals[0];
  return out;
}

namespace {

std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     const std::vector<double>& x, double eps) {
  const size_t n = x.size();
  std::vector<double> g(n), xp = x;
  for (size_t i = 0; i < n; ++i) {
    const double h = eps * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

VectorResult bfgs_polish(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x0, const BfgsOptions& opts) {
  const size_t n = x0.size();
  std::vector<double> x = std::move(x0);
  double fx = f(x);
  std::vector<double> g = numeric_gradient(f, x, opts.step_eps);
  // H approximates the inverse Hessian, initialized to identity
  std::vector<double> H(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;

  VectorResult out;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    double gnorm = 0.0;
    for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
    if (gnorm < opts.grad_tol) {
      out.converged = true;
      break;
    }
    // p = -H g
    std::vector<double> p(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (size_t j = 0; j < n; ++j) s += H[i * n + j] * g[j];
      p[i] = -s;
    }
    double gp = 0.0;
    for (size_t i = 0; i < n; ++i) gp += g[i] * p[i];
    if (gp >= 0.0) {  // not a descent direction; reset
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) H[i * n + j] = (i == j) ? 1.0 : 0.0;
        p[i] = -g[i];
      }
      gp = 0.0;
      for (size_t i = 0; i < n; ++i) gp += g[i] * p[i];
    }
    // Armijo backtracking
    double t = 1.0;
    double fnew = fx;
    std::vector<double> xnew(n);
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (size_t i = 0; i < n; ++i) xnew[i] = x[i] + t * p[i];
      fnew = f(xnew);
      if (std::isfinite(fnew) && fnew <= fx + 1e-4 * t * gp) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) break;
    std::vector<double> gnew = numeric_gradient(f, xnew, opts.step_eps);
    // BFGS update
    std::vector<double> s(n), y(n);
    double sy = 0.0;
    for (size_t i = 0; i < n; ++i) {
      s[i] = xnew[i] - x[i];
      y[i] = gnew[i] - g[i];
      sy += s[i] * y[i];
    }
    if (sy > 1e-12) {
      std::vector<double> Hy(n, 0.0);
      for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j) acc += H[i * n + j] * y[j];
        Hy[i] = acc;
      }
      double yHy = 0.0;
      for (size_t i = 0; i < n; ++i) yHy += y[i] * Hy[i];
      const double c1 = (sy + yHy) / (sy * sy);
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
          H[i * n + j] += c1 * s[i] * s[j] - (Hy[i] * s[j] + s[i] * Hy[j]) / sy;
        }
      }
    }
    x = std::move(xnew);
    fx = fnew;
    g = std::move(gnew);
  }
  out.iterations = iter;
  out.x = x;
  out.fx = fx;
  return out;
}

RootResult monotone_root(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double target, double lo,
                         double hi, double f_tol, double coarse_width, int max_iter) {
  RootResult out;
  double flo = f(lo) - target, fhi = f(hi) - target;
  if (flo == 0.0) {
    out.x = lo;
    out.converged = true;
    return out;
  }
  if (fhi == 0.0) {
    out.x = hi;
    out.converged = true;
    return out;
  }
  if (flo > 0.0 || fhi < 0.0) {
    // target outside range; return nearest endpoint
    out.x = (flo > 0.0) ? lo : hi;
    out.converged = std::abs((flo > 0.0 ? flo : fhi)) <= f_tol;
    return out;
  }
  int iter = 0;
  // bisection to a coarse bracket
  while (hi - lo > coarse_width && iter < max_iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - target;
    ++iter;
    if (fm == 0.0) {
      out.x = mid;
      out.iterations = iter;
      out.converged = true;
      return out;
    }
    if (fm < 0.0) lo = mid; else hi = mid;
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x) - target;
  for (; iter < max_iter; ++iter) {
    if (std::abs(fx) <= f_tol) {
      out.converged = true;
      break;
    }
    if (fx < 0.0) lo = x; else hi = x;
    const double d = df(x);
    double xn = (d > 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
    fx = f(x) - target;
  }
  out.x = x;
  out.iterations = iter;
  if (std::abs(fx) <= f_tol) out.converged = true;
  return out;
}

}  // namespace bvine::opt
