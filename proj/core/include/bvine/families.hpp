#pragma once

#include <array>
#include <string>
#include <vector>

#include "bvine/numerics.hpp"

namespace bvine {

/// The candidate set used throughout: eight dependence families plus the
/// independence copula for truncation and trivial cases.
enum class FamilyId {
  Independence,
  Gaussian,
  StudentT,
  Clayton,
  Gumbel,
  SurvivalClayton,
  SurvivalGumbel,
  Clayton90,
  Gumbel90,
};

const char* family_name(FamilyId f);
FamilyId family_from_name(const std::string& name);  // throws on unknown name

/// All eight dependence families (Independence excluded).
const std::array<FamilyId, 8>& candidate_families();

struct ParameterDomain {
  double lo = 0.0;
  double hi = 0.0;
  /// true when the likelihood can diverge as theta approaches the bound
  /// (comonotone/countermonotone degeneracy); an ML estimate pinned there
  /// counts as optimizer non-convergence.
  bool divergent_lo = false;
  bool divergent_hi = false;
};

ParameterDomain parameter_domain(FamilyId f);

/// A bivariate parametric copula. theta is the dependence parameter
/// (correlation for the elliptical families); the 90-degree rotations carry
/// the mirrored (negative) domain. nu is the Student t degrees of freedom
/// and must be set iff family == StudentT.
struct ParametricPairCopula {
  FamilyId family = FamilyId::Independence;
  double theta = 0.0;
  double nu = 0.0;

  void validate() const;  // throws std::invalid_argument outside the domain
};

// All evaluators clamp u, v into [1e-10, 1-1e-10] first.

double cdf(const ParametricPairCopula& c, double u, double v);
double density(const ParametricPairCopula& c, double u, double v);
double log_density(const ParametricPairCopula& c, double u, double v);

/// h1(v | u) = dC(u,v)/du, the conditional cdf of the second argument given
/// the first; h2(u | v) = dC(u,v)/dv.
double h1(const ParametricPairCopula& c, double v, double u);
double h2(const ParametricPairCopula& c, double u, double v);
double h1_inverse(const ParametricPairCopula& c, double w, double u);
double h2_inverse(const ParametricPairCopula& c, double w, double v);

std::vector<std::array<double, 2>> sample(const ParametricPairCopula& c, std::size_t n,
                                          num::Rng& rng);

/// Closed-form Kendall tau of the family, and its inversion. For StudentT
/// tau depends only on the correlation.
double kendall_tau(const ParametricPairCopula& c);
double theta_from_tau(FamilyId f, double tau);
/// Range of tau values the family can represent (closed under the domain).
std::array<double, 2> tau_range(FamilyId f);

struct PairFitResult {
  ParametricPairCopula copula;
  double loglik = 0.0;
  double aic = 0.0;
  int n_params = 0;
  int iterations = 0;
  bool converged = false;
  std::string note;  // non-convergence reason when !converged
};

/// Maximum-likelihood fit of one family to a bivariate sample in (0,1)^2.
/// One-parameter families use Brent on the tau-inversion-bracketed interval;
/// StudentT profiles nu over {2.5, 3, 4, ..., 30} with golden-section
/// refinement. Requires at least 10 observations strictly inside the square.
PairFitResult fit_ml(FamilyId f, const std::vector<double>& u, const std::vector<double>& v);

}  // namespace bvine
