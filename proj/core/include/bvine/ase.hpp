#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvine/vine.hpp"

namespace bvine {

struct StudyConfig {
  std::vector<int> dims = {3, 5, 7, 9, 11, 13, 15};
  std::vector<VineKind> kinds = {VineKind::CVine, VineKind::DVine};
  std::vector<std::size_t> sample_sizes = {200, 500};
  int replications = 1000;
  int bernstein_m = 0;  // 0 = cube-root rule per sample size
  int ase_grid = 20;    // evaluation grid m1 = m2
  std::uint64_t seed = 1;
  int threads = 1;
  bool aic_true_structure = true;  // hand the AIC arm the true structure too

  void validate() const;
};

struct AseRecord {
  int dim = 0;
  VineKind kind = VineKind::CVine;
  std::size_t n = 0;
  int replication = 0;
  std::string arm;  // "aic" or "bernstein"
  double ase = 0.0;
  bool unstable = false;
  std::string failure_reason;
};

struct StudyCell {
  int dim = 0;
  VineKind kind = VineKind::CVine;
  std::size_t n = 0;
  int replications = 0;
  double aic_mean_ase = 0.0;  // over stable replications
  double aic_instability_pct = 0.0;
  double bern_mean_ase = 0.0;
  double bern_instability_pct = 0.0;
};

struct StudyResult {
  std::vector<AseRecord> records;
  std::vector<StudyCell> summary;
};

/// Random true vine on the identity order: each edge's family drawn
/// uniformly from the eight candidates, parameter from |tau| ~ U(0.1, 0.7)
/// inverted per family (nu ~ U(3,10) for StudentT). Elliptical families get
/// a random dependence sign; rotations force theirs.
VineModel random_true_vine(int d, VineKind kind, num::Rng& rng);

/// Average squared cdf error over all edges on the uniform grid
/// (j/(m1+1), k/(m2+1)). Structures must match edge for edge.
double ase(const VineModel& truth, const VineModel& fitted, int m1, int m2);

/// The full simulation experiment: per replication draw a truth, simulate,
/// rank-transform, fit both arms on the true structure, record ASE and
/// instability. Summary means cover stable replications only.
StudyResult run_study(const StudyConfig& cfg);

}  // namespace bvine
