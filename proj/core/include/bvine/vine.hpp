#pragma once

#include <string>
#include <vector>

#include "bvine/empirical.hpp"
#include "bvine/numerics.hpp"
#include "bvine/pair_copula.hpp"

namespace bvine {

enum class VineKind { CVine, DVine };

const char* vine_kind_name(VineKind k);
VineKind vine_kind_from_name(const std::string& s);

struct VineStructure {
  VineKind kind = VineKind::CVine;
  std::vector<int> order;  // permutation of 0..d-1; position -> original column

  int dim() const { return static_cast<int>(order.size()); }
  void validate() const;  // throws unless order is a permutation and d >= 2
};

/// Tree j (0-based) holds d-1-j edges. In the C-vine, edge (j, e) couples
/// permuted variables (j, j+1+e) given the first j; in the D-vine it couples
/// (e, e+j+1) given the variables between them. Edge copulas take the
/// lower-index variable's conditional cdf as their first argument.
struct VineModel {
  VineStructure structure;
  std::vector<std::vector<PairCopula>> trees;

  int dim() const { return structure.dim(); }
  int edge_count() const { return dim() * (dim() - 1) / 2; }
  const PairCopula& edge(int tree, int e) const { return trees.at(tree).at(e); }
  PairCopula& edge(int tree, int e) { return trees.at(tree).at(e); }
};

/// Copula-scale log density at a point in (0,1)^d (original column order).
/// Throws with the edge identity if a contribution is non-finite.
double log_density(const VineModel& model, const std::vector<double>& u);

/// i.i.d. draws via the recursive inverse-h algorithms; rows come back in
/// original column order.
std::vector<std::vector<double>> simulate(const VineModel& model, std::size_t n, num::Rng& rng);

struct InstabilityEvent {
  int tree = 0;   // 1-based, for reporting
  int edge = 0;   // 1-based
  FamilyId family = FamilyId::Independence;
  std::string reason;
  bool selected = false;  // the affected candidate won the AIC race
};

struct VineFitReport {
  struct EdgeSummary {
    int tree = 0;  // 1-based
    int edge = 0;  // 1-based
    std::string description;
    double aic = 0.0;          // parametric arm
    double loglik = 0.0;       // parametric arm
    double qp_objective = 0.0; // Bernstein arm
  };
  std::vector<EdgeSummary> edges;
  std::vector<InstabilityEvent> events;
  bool total_breakdown = false;  // some edge had no finite-AIC candidate

  bool unstable() const { return total_breakdown || !events.empty(); }
  /// true when an event touches a copula that was actually selected
  bool selected_edge_unstable() const;
};

/// Tree-by-tree AIC selection over the candidate families; transformed
/// observations are clamped to [1e-6, 1-1e-6] before deeper trees.
VineModel fit_sequential_parametric(const PseudoSample& data, const VineStructure& structure,
                                    const std::vector<FamilyId>& families, VineFitReport* report);
VineModel fit_sequential_parametric(const PseudoSample& data, const VineStructure& structure,
                                    VineFitReport* report = nullptr);

/// Same recursion with every edge fitted as a Bernstein copula of grid m.
VineModel fit_sequential_bernstein(const PseudoSample& data, const VineStructure& structure, int m,
                                   VineFitReport* report = nullptr);

/// Structure selection. C-vine: variables ranked by the sum of |tau| to all
/// others. D-vine: maximum-weight Hamiltonian path under |tau| (exact by
/// subset DP for d <= 8, greedy endpoint extension above).
VineStructure select_order(const PseudoSample& data, VineKind kind);

// ---------------------------------------------------------------------------
// Serialization: versioned flat text, one edge per line, 17 significant
// digits; round trips are bit exact.
// ---------------------------------------------------------------------------

std::string to_text(const VineModel& model);
VineModel vine_from_text(const std::string& text);  // throws on corrupt input
void save_vine(const VineModel& model, const std::string& path);
VineModel load_vine(const std::string& path);

}  // namespace bvine
