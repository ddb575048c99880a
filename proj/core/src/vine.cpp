#include "bvine/vine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bvine/io.hpp"

namespace bvine {

namespace {

constexpr double kTreeClampLo = 1e-6;
constexpr double kTreeClampHi = 1.0 - 1e-6;

double tree_clamp(double w) { return std::clamp(w, kTreeClampLo, kTreeClampHi); }

}  // namespace

const char* vine_kind_name(VineKind k) { return k == VineKind::CVine ? "C" : "D"; }

VineKind vine_kind_from_name(const std::string& s) {
  if (s == "C" || s == "c" || s == "cvine") return VineKind::CVine;
  if (s == "D" || s == "d" || s == "dvine") return VineKind::DVine;
  throw std::invalid_argument("unknown vine kind: " + s);
}

void VineStructure::validate() const {
  const int d = dim();
  if (d < 2) throw std::invalid_argument("vine: dimension >= 2 required");
  std::vector<char> seen(d, 0);
  for (int v : order) {
    if (v < 0 || v >= d || seen[v]) throw std::invalid_argument("vine: order must be a permutation");
    seen[v] = 1;
  }
}

double log_density(const VineModel& model, const std::vector<double>& u) {
  const int d = model.dim();
  model.structure.validate();
  if (static_cast<int>(u.size()) != d) throw std::invalid_argument("log_density: dimension mismatch");
  for (double ui : u) {
    if (!(ui > 0.0 && ui < 1.0)) throw std::invalid_argument("log_density: point must be interior");
  }
  std::vector<double> w(d);
  for (int i = 0; i < d; ++i) w[i] = u[model.structure.order[i]];

  double ll = 0.0;
  auto accumulate = [&](int tree, int e, double a, double b) {
    const double c = model.edge(tree, e).log_density(a, b);
    if (!std::isfinite(c)) {
      throw std::runtime_error("vine log_density: non-finite contribution at tree " +
                               std::to_string(tree + 1) + " edge " + std::to_string(e + 1));
    }
    ll += c;
  };

  if (model.structure.kind == VineKind::CVine) {
    std::vector<double> cond = w;  // cond[i] = F(x_i | x_0..x_{t-1})
    for (int t = 0; t <= d - 2; ++t) {
      for (int i = t + 1; i < d; ++i) accumulate(t, i - t - 1, cond[t], cond[i]);
      for (int i = t + 1; i < d; ++i) {
        cond[i] = model.edge(t, i - t - 1).h1(cond[i], cond[t]);
      }
    }
  } else {
    std::vector<double> F = w, B = w;  // F[s]=F(x_s | right block), B[s]=F(x_{s+t} | left block)
    for (int t = 0; t <= d - 2; ++t) {
      const int n_edges = d - 1 - t;
      std::vector<double> nF(n_edges), nB(n_edges);
      for (int i = 0; i < n_edges; ++i) {
        accumulate(t, i, F[i], B[i + 1]);
        nF[i] = model.edge(t, i).h2(F[i], B[i + 1]);
        nB[i] = model.edge(t, i).h1(B[i + 1], F[i]);
      }
      F = std::move(nF);
      B = std::move(nB);
    }
  }
  return ll;
}

std::vector<std::vector<double>> simulate(const VineModel& model, std::size_t n, num::Rng& rng) {
  const int d = model.dim();
  model.structure.validate();
  std::vector<std::vector<double>> out(n, std::vector<double>(d));

  for (std::size_t row = 0; row < n; ++row) {
    std::vector<double> w(d);
    for (int i = 0; i < d; ++i) w[i] = num::uniform01(rng);
    std::vector<double> x(d);

    if (model.structure.kind == VineKind::CVine) {
      // cond[k][i] = F(x_i | x_0..x_{k-1}); cond[k][k] feeds later variables
      std::vector<std::vector<double>> cond(d, std::vector<double>(d, 0.0));
      x[0] = w[0];
      cond[0][0] = x[0];
      for (int i = 1; i < d; ++i) {
        double v = w[i];
        for (int k = i - 1; k >= 0; --k) {
          v = model.edge(k, i - k - 1).h1_inverse(v, cond[k][k]);
        }
        x[i] = v;
        cond[0][i] = v;
        for (int k = 1; k <= i; ++k) {
          cond[k][i] = model.edge(k - 1, i - k).h1(cond[k - 1][i], cond[k - 1][k - 1]);
        }
      }
    } else {
      // F(s,e) = F(x_s | x_{s+1..e}),  B(s,e) = F(x_e | x_{s..e-1})
      std::vector<std::vector<double>> F(d, std::vector<double>(d, 0.0));
      std::vector<std::vector<double>> B(d, std::vector<double>(d, 0.0));
      x[0] = w[0];
      F[0][0] = B[0][0] = x[0];
      for (int i = 1; i < d; ++i) {
        double v = w[i];
        for (int s = 0; s <= i - 1; ++s) {
          v = model.edge(i - s - 1, s).h1_inverse(v, F[s][i - 1]);
        }
        x[i] = v;
        F[i][i] = B[i][i] = v;
        for (int s = i - 1; s >= 0; --s) {
          B[s][i] = model.edge(i - s - 1, s).h1(B[s + 1][i], F[s][i - 1]);
        }
        for (int s = i - 1; s >= 0; --s) {
          F[s][i] = model.edge(i - s - 1, s).h2(F[s][i - 1], B[s + 1][i]);
        }
      }
    }
    for (int i = 0; i < d; ++i) out[row][model.structure.order[i]] = x[i];
  }
  return out;
}

bool VineFitReport::selected_edge_unstable() const {
  if (total_breakdown) return true;
  for (const auto& e : events) {
    if (e.selected) return true;
  }
  return false;
}

namespace {

// fit one edge for the parametric arm: all candidates, keep minimal AIC
PairCopula fit_edge_parametric(const std::vector<double>& a, const std::vector<double>& b,
                               const std::vector<FamilyId>& families, int tree, int e,
                               VineFitReport* report) {
  double best_aic = HUGE_VAL;
  PairFitResult best;
  bool have = false;
  std::vector<std::size_t> event_idx;
  for (FamilyId f : families) {
    PairFitResult r;
    try {
      r = fit_ml(f, a, b);
    } catch (const std::exception& ex) {
      if (report) {
        report->events.push_back({tree + 1, e + 1, f, ex.what(), false});
        event_idx.push_back(report->events.size() - 1);
      }
      continue;
    }
    if (!r.converged && report) {
      report->events.push_back({tree + 1, e + 1, f, r.note.empty() ? "non-convergence" : r.note,
                                false});
      event_idx.push_back(report->events.size() - 1);
    }
    if (std::isfinite(r.aic) && r.aic < best_aic) {
      best_aic = r.aic;
      best = r;
      have = true;
    }
  }
  if (!have) {
    if (report) {
      report->total_breakdown = true;
      report->events.push_back({tree + 1, e + 1, FamilyId::Independence,
                                "no candidate produced a finite AIC", true});
    }
    return PairCopula(ParametricPairCopula{FamilyId::Independence, 0.0, 0.0});
  }
  if (report) {
    for (std::size_t idx : event_idx) {
      if (report->events[idx].family == best.copula.family) report->events[idx].selected = true;
    }
    report->edges.push_back({tree + 1, e + 1, PairCopula(best.copula).describe(), best.aic,
                             best.loglik, 0.0});
  }
  return PairCopula(best.copula);
}

PairCopula fit_edge_bernstein(const std::vector<double>& a, const std::vector<double>& b, int m,
                              int tree, int e, VineFitReport* report) {
  BernsteinFitInfo info;
  auto cop = fit_bernstein(a, b, m, &info);
  if (report) {
    VineFitReport::EdgeSummary s;
    s.tree = tree + 1;
    s.edge = e + 1;
    s.description = "bernstein m=" + std::to_string(m);
    s.qp_objective = info.qp_objective;
    report->edges.push_back(std::move(s));
  }
  return PairCopula(std::move(cop));
}

template <typename EdgeFitter>
VineModel fit_sequential(const PseudoSample& data, const VineStructure& structure,
                         EdgeFitter&& fit_edge) {
  structure.validate();
  const int d = structure.dim();
  if (static_cast<int>(data.dim()) != d) {
    throw std::invalid_argument("fit: data dimension does not match structure");
  }
  VineModel model;
  model.structure = structure;
  model.trees.resize(d - 1);

  // columns in vine order, clamped like every deeper level
  std::vector<std::vector<double>> w(d);
  for (int i = 0; i < d; ++i) w[i] = data.cols[structure.order[i]];
  const std::size_t n = data.n();

  if (structure.kind == VineKind::CVine) {
    for (int t = 0; t <= d - 2; ++t) {
      model.trees[t].reserve(d - 1 - t);
      for (int i = t + 1; i < d; ++i) {
        model.trees[t].push_back(fit_edge(w[t], w[i], t, i - t - 1));
      }
      for (int i = t + 1; i < d; ++i) {
        const auto& cop = model.trees[t][i - t - 1];
        for (std::size_t r = 0; r < n; ++r) {
          w[i][r] = tree_clamp(cop.h1(w[i][r], w[t][r]));
        }
      }
    }
  } else {
    std::vector<std::vector<double>> F = w, B = w;
    for (int t = 0; t <= d - 2; ++t) {
      const int n_edges = d - 1 - t;
      model.trees[t].reserve(n_edges);
      for (int i = 0; i < n_edges; ++i) {
        model.trees[t].push_back(fit_edge(F[i], B[i + 1], t, i));
      }
      std::vector<std::vector<double>> nF(n_edges), nB(n_edges);
      for (int i = 0; i < n_edges; ++i) {
        const auto& cop = model.trees[t][i];
        nF[i].resize(n);
        nB[i].resize(n);
        for (std::size_t r = 0; r < n; ++r) {
          nF[i][r] = tree_clamp(cop.h2(F[i][r], B[i + 1][r]));
          nB[i][r] = tree_clamp(cop.h1(B[i + 1][r], F[i][r]));
        }
      }
      F = std::move(nF);
      B = std::move(nB);
    }
  }
  return model;
}

}  // namespace

VineModel fit_sequential_parametric(const PseudoSample& data, const VineStructure& structure,
                                    const std::vector<FamilyId>& families, VineFitReport* report) {
  if (data.n() < 30) throw std::invalid_argument("fit_sequential_parametric: need n >= 30");
  if (families.empty()) throw std::invalid_argument("fit_sequential_parametric: empty candidate set");
  return fit_sequential(data, structure,
                        [&](const std::vector<double>& a, const std::vector<double>& b, int t,
                            int e) { return fit_edge_parametric(a, b, families, t, e, report); });
}

VineModel fit_sequential_parametric(const PseudoSample& data, const VineStructure& structure,
                                    VineFitReport* report) {
  const auto& fams = candidate_families();
  return fit_sequential_parametric(data, structure,
                                   std::vector<FamilyId>(fams.begin(), fams.end()), report);
}

VineModel fit_sequential_bernstein(const PseudoSample& data, const VineStructure& structure, int m,
                                   VineFitReport* report) {
  if (data.n() < static_cast<std::size_t>(5 * m)) {
    throw std::invalid_argument("fit_sequential_bernstein: need n >= 5 m");
  }
  return fit_sequential(data, structure,
                        [&](const std::vector<double>& a, const std::vector<double>& b, int t,
                            int e) { return fit_edge_bernstein(a, b, m, t, e, report); });
}

VineStructure select_order(const PseudoSample& data, VineKind kind) {
  const int d = static_cast<int>(data.dim());
  if (d < 2) throw std::invalid_argument("select_order: d >= 2 required");
  const auto tau = kendall_tau_matrix(data);

  VineStructure s;
  s.kind = kind;
  if (kind == VineKind::CVine) {
    // rank variables by total absolute dependence to all others
    std::vector<double> score(d, 0.0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j) score[i] += std::abs(tau[i][j]);
      }
    }
    s.order.resize(d);
    std::iota(s.order.begin(), s.order.end(), 0);
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](int a, int b) { return score[a] > score[b]; });
  } else {
    if (d <= 8) {
      // exact max-weight Hamiltonian path by DP over subsets
      const int full = 1 << d;
      std::vector<std::vector<double>> best(full, std::vector<double>(d, -1.0));
      std::vector<std::vector<int>> parent(full, std::vector<int>(d, -1));
      for (int i = 0; i < d; ++i) best[1 << i][i] = 0.0;
      for (int mask = 1; mask < full; ++mask) {
        for (int last = 0; last < d; ++last) {
          if (!(mask & (1 << last)) || best[mask][last] < 0.0) continue;
          for (int nxt = 0; nxt < d; ++nxt) {
            if (mask & (1 << nxt)) continue;
            const int nm = mask | (1 << nxt);
            const double val = best[mask][last] + std::abs(tau[last][nxt]);
            if (val > best[nm][nxt]) {
              best[nm][nxt] = val;
              parent[nm][nxt] = last;
            }
          }
        }
      }
      int last = 0;
      for (int i = 1; i < d; ++i) {
        if (best[full - 1][i] > best[full - 1][last]) last = i;
      }
      std::vector<int> path;
      int mask = full - 1;
      while (last >= 0) {
        path.push_back(last);
        const int p = parent[mask][last];
        mask &= ~(1 << last);
        last = p;
      }
      std::reverse(path.begin(), path.end());
      s.order = path;
    } else {
      // greedy: strongest pair first, then extend the better endpoint
      int bi = 0, bj = 1;
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          if (std::abs(tau[i][j]) > std::abs(tau[bi][bj])) {
            bi = i;
            bj = j;
          }
        }
      }
      std::vector<int> path = {bi, bj};
      std::vector<char> used(d, 0);
      used[bi] = used[bj] = 1;
      while (static_cast<int>(path.size()) < d) {
        auto best_ext = [&](int endpoint) {
          int arg = -1;
          double val = -1.0;
          for (int k = 0; k < d; ++k) {
            if (!used[k] && std::abs(tau[endpoint][k]) > val) {
              val = std::abs(tau[endpoint][k]);
              arg = k;
            }
          }
          return std::make_pair(val, arg);
        };
        auto [vf, kf] = best_ext(path.front());
        auto [vb, kb] = best_ext(path.back());
        if (vf > vb) {
          path.insert(path.begin(), kf);
          used[kf] = 1;
        } else {
          path.push_back(kb);
          used[kb] = 1;
        }
      }
      s.order = path;
    }
    // canonical direction so relabeling is deterministic
    if (s.order.back() < s.order.front()) std::reverse(s.order.begin(), s.order.end());
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string to_text(const VineModel& model) {
  std::ostringstream out;
  const int d = model.dim();
  out << "bvine-vine 1\n";
  out << "kind " << vine_kind_name(model.structure.kind) << "\n";
  out << "d " << d << "\n";
  out << "order";
  for (int v : model.structure.order) out << ' ' << (v + 1);
  out << "\n";
  for (int t = 0; t < d - 1; ++t) {
    for (int e = 0; e < d - 1 - t; ++e) {
      const auto& cop = model.edge(t, e);
      out << "edge " << (t + 1) << ' ' << (e + 1) << ' ';
      if (cop.is_parametric()) {
        const auto& p = cop.parametric();
        out << "parametric " << family_name(p.family) << ' ' << io::format_full(p.theta);
        if (p.family == FamilyId::StudentT) out << ' ' << io::format_full(p.nu);
      } else {
        const auto& b = cop.bernstein();
        out << "bernstein " << b.grid_size();
        for (double w : b.weights()) out << ' ' << io::format_full(w);
      }
      out << "\n";
    }
  }
  return out.str();
}

VineModel vine_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto fail = [](const std::string& why) -> void {
    throw std::runtime_error("vine model parse error: " + why);
  };
  if (!std::getline(in, line) || io::trim(line) != "bvine-vine 1") {
    fail("missing or unsupported header");
  }
  VineModel model;
  int d = 0;
  bool have_kind = false, have_d = false, have_order = false;
  std::vector<std::vector<std::string>> edge_lines;
  while (std::getline(in, line)) {
    line = io::trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "kind") {
      std::string k;
      ls >> k;
      model.structure.kind = vine_kind_from_name(k);
      have_kind = true;
    } else if (tag == "d") {
      ls >> d;
      if (d < 2) fail("d must be >= 2");
      have_d = true;
    } else if (tag == "order") {
      if (!have_d) fail("order before d");
      model.structure.order.resize(d);
      for (int i = 0; i < d; ++i) {
        int v;
        if (!(ls >> v)) fail("short order line");
        model.structure.order[i] = v - 1;
      }
      model.structure.validate();
      have_order = true;
    } else if (tag == "edge") {
      std::vector<std::string> tok;
      std::string t;
      tok.push_back(tag);
      while (ls >> t) tok.push_back(t);
      edge_lines.push_back(std::move(tok));
    } else {
      fail("unknown line tag '" + tag + "'");
    }
  }
  if (!have_kind || !have_d || !have_order) fail("incomplete header fields");
  model.trees.resize(d - 1);
  for (int t = 0; t < d - 1; ++t) model.trees[t].resize(d - 1 - t);
  std::vector<std::vector<char>> seen(d - 1);
  for (int t = 0; t < d - 1; ++t) seen[t].assign(d - 1 - t, 0);

  for (const auto& tok : edge_lines) {
    if (tok.size() < 5) fail("short edge line");
    const int t = std::stoi(tok[1]) - 1;
    const int e = std::stoi(tok[2]) - 1;
    if (t < 0 || t >= d - 1 || e < 0 || e >= d - 1 - t) fail("edge index out of range");
    if (seen[t][e]) fail("duplicate edge");
    seen[t][e] = 1;
    if (tok[3] == "parametric") {
      ParametricPairCopula p;
      p.family = family_from_name(tok[4]);
      if (p.family == FamilyId::Independence) {
        if (tok.size() > 5) p.theta = io::parse_double(tok[5]);
      } else {
        if (tok.size() < 6) fail("missing parameter");
        p.theta = io::parse_double(tok[5]);
        if (p.family == FamilyId::StudentT) {
          if (tok.size() < 7) fail("missing nu");
          p.nu = io::parse_double(tok[6]);
        }
      }
      p.validate();
      model.edge(t, e) = PairCopula(p);
    } else if (tok[3] == "bernstein") {
      const int m = std::stoi(tok[4]);
      if (m < 1) fail("bad grid size");
      const std::size_t need = static_cast<std::size_t>(m) * m;
      if (tok.size() != 5 + need) fail("bernstein weight count mismatch");
      std::vector<double> w(need);
      for (std::size_t i = 0; i < need; ++i) w[i] = io::parse_double(tok[5 + i]);
      model.edge(t, e) = PairCopula(BernsteinCopula(m, std::move(w)));
    } else {
      fail("unknown edge type '" + tok[3] + "'");
    }
  }
  for (int t = 0; t < d - 1; ++t) {
    for (int e = 0; e < d - 1 - t; ++e) {
      if (!seen[t][e]) fail("missing edge " + std::to_string(t + 1) + "," + std::to_string(e + 1));
    }
  }
  return model;
}

void save_vine(const VineModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << to_text(model);
  if (!out) throw std::runtime_error("write failed: " + path);
}

VineModel load_vine(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return vine_from_text(ss.str());
}

}  // namespace bvine
