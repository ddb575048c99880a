#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace bvine::opt {

struct ScalarResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's derivative-free minimizer on [a, b].
ScalarResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-9, int max_iter = 200);

struct VectorResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double initial_step = 0.1;
  double f_tol = 1e-10;
  double x_tol = 1e-9;
  int max_iter = 2000;
};

VectorResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x0, const NelderMeadOptions& opts = {});

struct BfgsOptions {
  double grad_tol = 1e-7;
  double step_eps = 1e-6;  // central-difference step scale
  int max_iter = 60;
};

/// BFGS with numerical central-difference gradients; intended as a polish
/// step after a derivative-free search.
VectorResult bfgs_polish(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x0, const BfgsOptions& opts = {});

struct RootResult {
  double x = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Solve f(x) = target for monotone f on [lo, hi]: bisection until the
/// bracket shrinks to coarse_width, then Newton with derivative df and
/// bisection fallback. |f(x) - target| <= f_tol on success.
RootResult monotone_root(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double target, double lo,
                         double hi, double f_tol = 1e-9, double coarse_width = 1e-3,
                         int max_iter = 200);

}  // namespace bvine::opt
