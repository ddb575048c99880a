#include "bvine/ase.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bvine/threading.hpp"

namespace bvine {

void StudyConfig::validate() const {
  if (replications < 1) throw std::invalid_argument("study: replications >= 1");
  if (ase_grid < 10) throw std::invalid_argument("study: ASE grid must be at least 10x10");
  if (dims.empty() || kinds.empty() || sample_sizes.empty()) {
    throw std::invalid_argument("study: empty cell axis");
  }
  for (int d : dims) {
    if (d < 2) throw std::invalid_argument("study: dimension >= 2");
  }
}

VineModel random_true_vine(int d, VineKind kind, num::Rng& rng) {
  if (d < 2) throw std::invalid_argument("random_true_vine: d >= 2 required");
  VineModel model;
  model.structure.kind = kind;
  model.structure.order.resize(d);
  for (int i = 0; i < d; ++i) model.structure.order[i] = i;
  model.trees.resize(d - 1);

  const auto& fams = candidate_families();
  for (int t = 0; t < d - 1; ++t) {
    model.trees[t].reserve(d - 1 - t);
    for (int e = 0; e < d - 1 - t; ++e) {
      const FamilyId f = fams[static_cast<std::size_t>(num::uniform01(rng) * fams.size()) %
                              fams.size()];
      const double abs_tau = 0.1 + 0.6 * num::uniform01(rng);
      double tau;
      switch (f) {
        case FamilyId::Clayton90:
        case FamilyId::Gumbel90: tau = -abs_tau; break;
        case FamilyId::Gaussian:
        case FamilyId::StudentT: tau = num::uniform01(rng) < 0.5 ? -abs_tau : abs_tau; break;
        default: tau = abs_tau; break;
      }
      ParametricPairCopula c;
      c.family = f;
      c.theta = theta_from_tau(f, tau);
      if (f == FamilyId::StudentT) c.nu = 3.0 + 7.0 * num::uniform01(rng);
      c.validate();
      model.trees[t].push_back(PairCopula(c));
    }
  }
  return model;
}

double ase(const VineModel& truth, const VineModel& fitted, int m1, int m2) {
  const int d = truth.dim();
  if (fitted.dim() != d || fitted.structure.kind != truth.structure.kind) {
    throw std::invalid_argument("ase: structures do not match");
  }
  if (m1 < 1 || m2 < 1) throw std::invalid_argument("ase: grid must be positive");

  double total = 0.0;
  for (int t = 0; t < d - 1; ++t) {
    for (int e = 0; e < d - 1 - t; ++e) {
      const auto& ct = truth.edge(t, e);
      const auto& cf = fitted.edge(t, e);
      for (int j = 1; j <= m1; ++j) {
        const double u = static_cast<double>(j) / (m1 + 1);
        for (int k = 1; k <= m2; ++k) {
          const double v = static_cast<double>(k) / (m2 + 1);
          const double diff = cf.cdf(u, v) - ct.cdf(u, v);
          total += diff * diff;
        }
      }
    }
  }
  const double n_edges = 0.5 * d * (d - 1);
  return total / n_edges / (static_cast<double>(m1) * m2);
}

namespace {

struct RepOutcome {
  AseRecord aic;
  AseRecord bern;
};

RepOutcome run_replication(const StudyConfig& cfg, int dim, VineKind kind, std::size_t n,
                           int rep) {
  auto rng = num::substream(cfg.seed, {static_cast<std::uint64_t>(dim),
                                       static_cast<std::uint64_t>(kind), n,
                                       static_cast<std::uint64_t>(rep)});
  RepOutcome out;
  auto init = [&](AseRecord& r, const char* arm) {
    r.dim = dim;
    r.kind = kind;
    r.n = n;
    r.replication = rep;
    r.arm = arm;
  };
  init(out.aic, "aic");
  init(out.bern, "bernstein");

  const auto truth = random_true_vine(dim, kind, rng);
  const auto sample_rows = simulate(truth, n, rng);
  std::vector<std::vector<double>> cols(dim, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (int j = 0; j < dim; ++j) cols[j][r] = sample_rows[r][j];
  }
  const auto pseudo = pseudo_observations(cols);

  // Bernstein arm
  try {
    const int m = cfg.bernstein_m > 0 ? cfg.bernstein_m : bernstein_default_grid(n);
    const auto fitted = fit_sequential_bernstein(pseudo, truth.structure, m, nullptr);
    out.bern.ase = ase(truth, fitted, cfg.ase_grid, cfg.ase_grid);
    if (!std::isfinite(out.bern.ase) || out.bern.ase > 1.0) {
      out.bern.unstable = true;
      out.bern.failure_reason = "divergent ASE";
    }
  } catch (const std::exception& ex) {
    out.bern.unstable = true;
    out.bern.failure_reason = ex.what();
  }

  // sequential-AIC arm
  try {
    VineFitReport report;
    VineStructure structure = truth.structure;
    if (!cfg.aic_true_structure) structure = select_order(pseudo, kind);
    const auto fitted = fit_sequential_parametric(pseudo, structure, &report);
    if (cfg.aic_true_structure) {
      out.aic.ase = ase(truth, fitted, cfg.ase_grid, cfg.ase_grid);
    } else {
      out.aic.ase = std::nan("");  // edge sets differ; ASE vs truth undefined
    }
    if (report.unstable()) {
      out.aic.unstable = true;
      out.aic.failure_reason = report.total_breakdown
                                   ? "edge with no finite-AIC candidate"
                                   : report.events.front().reason + " (tree " +
                                         std::to_string(report.events.front().tree) + " edge " +
                                         std::to_string(report.events.front().edge) + ")";
    }
    if (!out.aic.unstable && (!std::isfinite(out.aic.ase) || out.aic.ase > 1.0)) {
      out.aic.unstable = true;
      out.aic.failure_reason = "divergent ASE";
    }
  } catch (const std::exception& ex) {
    out.aic.unstable = true;
    out.aic.failure_reason = ex.what();
  }
  return out;
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg) {
  cfg.validate();
  struct Cell {
    int dim;
    VineKind kind;
    std::size_t n;
  };
  std::vector<Cell> cells;
  for (int d : cfg.dims) {
    for (VineKind k : cfg.kinds) {
      for (std::size_t n : cfg.sample_sizes) cells.push_back({d, k, n});
    }
  }

  StudyResult result;
  for (const auto& cell : cells) {
    std::vector<RepOutcome> outcomes(cfg.replications);
    parallel_for(cfg.replications, cfg.threads, [&](std::size_t rep) {
      outcomes[rep] = run_replication(cfg, cell.dim, cell.kind, cell.n, static_cast<int>(rep));
    });

    StudyCell sc;
    sc.dim = cell.dim;
    sc.kind = cell.kind;
    sc.n = cell.n;
    sc.replications = cfg.replications;
    double aic_sum = 0.0, bern_sum = 0.0;
    int aic_stable = 0, bern_stable = 0, aic_unstable = 0, bern_unstable = 0;
    for (auto& o : outcomes) {
      if (o.aic.unstable) {
        ++aic_unstable;
      } else {
        aic_sum += o.aic.ase;
        ++aic_stable;
      }
      if (o.bern.unstable) {
        ++bern_unstable;
      } else {
        bern_sum += o.bern.ase;
        ++bern_stable;
      }
      result.records.push_back(std::move(o.aic));
      result.records.push_back(std::move(o.bern));
    }
    if (aic_stable + aic_unstable != cfg.replications ||
        bern_stable + bern_unstable != cfg.replications) {
      throw std::logic_error("run_study: replication accounting mismatch");
    }
    sc.aic_mean_ase = aic_stable > 0 ? aic_sum / aic_stable : std::nan("");
    sc.bern_mean_ase = bern_stable > 0 ? bern_sum / bern_stable : std::nan("");
    sc.aic_instability_pct = 100.0 * aic_unstable / cfg.replications;
    sc.bern_instability_pct = 100.0 * bern_unstable / cfg.replications;
    result.summary.push_back(sc);
  }
  return result;
}

}  // namespace bvine
