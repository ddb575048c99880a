#include "bvine/margin_projection.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bvine {

namespace {

constexpr double kConstraintTol = 1e-9;
constexpr double kDualTol = 1e-10;
constexpr double kZeroSnap = 1e-12;

void check_table(const ContingencyTable& a) {
  if (a.m < 2) throw std::invalid_argument("qp_project: m >= 2 required");
  double total = 0.0;
  for (double v : a.a) {
    if (v < -1e-12) throw std::invalid_argument("projection: negative table entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("projection: table mass must sum to 1");
  }
}

// Incrementally maintained thin QR of the active constraint normals.
struct ActiveQr {
  Eigen::MatrixXd Q;  // n x q, orthonormal columns
  Eigen::MatrixXd R;  // q x q, upper triangular
  int q = 0;

  explicit ActiveQr(int n) : Q(n, 0), R(0, 0) {}

  // returns false if the new normal is (numerically) in the current span
  bool add(const Eigen::VectorXd& normal) {
    Eigen::VectorXd w = Q.leftCols(q).transpose() * normal;
    Eigen::VectorXd z = normal - Q.leftCols(q) * w;
    const double rho = z.norm();
    if (rho <= 1e-12 * std::max(1.0, normal.norm())) return false;
    Q.conservativeResize(Eigen::NoChange, q + 1);
    R.conservativeResize(q + 1, q + 1);
    Q.col(q) = z / rho;
    R.col(q).head(q) = w;
    R.row(q).head(q).setZero();
    R(q, q) = rho;
    ++q;
    return true;
  }

  void drop(int k) {
    // remove column k, then restore triangularity with Givens rotations
    for (int j = k; j < q - 1; ++j) R.col(j) = R.col(j + 1);
    R.conservativeResize(Eigen::NoChange, q - 1);
    for (int i = k; i < q - 1; ++i) {
      const double x = R(i, i), y = R(i + 1, i);
      const double r = std::hypot(x, y);
      if (r == 0.0) continue;
      const double c = x / r, s = y / r;
      for (int j = i; j < q - 1; ++j) {
        const double t1 = R(i, j), t2 = R(i + 1, j);
        R(i, j) = c * t1 + s * t2;
        R(i + 1, j) = -s * t1 + c * t2;
      }
      for (int row = 0; row < Q.rows(); ++row) {
        const double t1 = Q(row, i), t2 = Q(row, i + 1);
        Q(row, i) = c * t1 + s * t2;
        Q(row, i + 1) = -s * t1 + c * t2;
      }
    }
    Q.conservativeResize(Eigen::NoChange, q - 1);
    R.conservativeResize(q - 1, Eigen::NoChange);
    --q;
  }
};

}  // namespace

std::vector<double> lagrange_project(const ContingencyTable& a) {
  check_table(a);
  const int m = a.m;
  std::vector<double> x(static_cast<std::size_t>(m) * m);
  const double inv_m = 1.0 / m, two_m2 = 2.0 / (static_cast<double>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      x[static_cast<std::size_t>(i) * m + j] =
          a.at(i, j) - a.col_sums[j] * inv_m - a.row_sums[i] * inv_m + two_m2;
    }
  }
  return x;
}

std::vector<double> iterated_lagrange(const ContingencyTable& a, int max_rounds) {
  check_table(a);
  const int m = a.m;
  const double target = 1.0 / m;
  std::vector<double> y = a.a;
  // orthogonal projection onto the margin subspace for a table of any mass
  auto project = [&](std::vector<double>& x) {
    std::vector<double> rs(m, 0.0), cs(m, 0.0);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        rs[i] += x[i * m + j];
        cs[j] += x[i * m + j];
      }
      total += rs[i];
    }
    const double shared = (total - 1.0) / (2.0 * m);
    for (int i = 0; i < m; ++i) {
      const double u = (rs[i] - target - shared) / m;
      for (int j = 0; j < m; ++j) {
        const double w = (cs[j] - target - shared) / m;
        x[i * m + j] -= u + w;
      }
    }
  };
  for (int round = 0; round < max_rounds; ++round) {
    project(y);
    double min_v = 0.0;
    for (double v : y) min_v = std::min(min_v, v);
    if (min_v >= -kZeroSnap) break;
    for (double& v : y) v = std::max(v, 0.0);
  }
  for (double& v : y) {
    if (v < 0.0 && v >= -1e-9) v = 0.0;
  }
  return y;
}

ProjectedTable qp_project(const ContingencyTable& table) {
  check_table(table);
  const int m = table.m;
  const int n = m * m;
  const double target = 1.0 / m;

  // constraints: 2m-1 margin equalities (last column sum dropped), then the
  // n nonnegativity bounds. Normals of the bounds are unit vectors, which
  // keeps all inner products below O(m) work.
  const int n_eq = 2 * m - 1;
  const int n_con = n_eq + n;

  auto normal_of = [&](int c) {
    Eigen::VectorXd nv = Eigen::VectorXd::Zero(n);
    if (c < m) {  // row c sum
      for (int l = 0; l < m; ++l) nv[c * m + l] = 1.0;
    } else if (c < n_eq) {  // column (c - m) sum
      const int col = c - m;
      for (int k = 0; k < m; ++k) nv[k * m + col] = 1.0;
    } else {
      nv[c - n_eq] = 1.0;
    }
    return nv;
  };
  auto bound_of = [&](int c) { return c < n_eq ? target : 0.0; };

  Eigen::Map<const Eigen::VectorXd> a(table.a.data(), n);
  Eigen::VectorXd x = a;  // unconstrained minimizer

  ActiveQr qr(n);
  std::vector<int> active;        // constraint indices
  std::vector<double> sign;       // +1, or -1 for equalities added negated
  std::vector<double> mult;       // multipliers, aligned with `active`

  const int max_iter = 50 * n;
  int iterations = 0;

  auto slack = [&](int c) {
    double s;
    if (c < m) {
      s = x.segment(c * m, m).sum();
    } else if (c < n_eq) {
      s = 0.0;
      for (int k = 0; k < m; ++k) s += x[k * m + (c - m)];
    } else {
      s = x[c - n_eq];
    }
    return s - bound_of(c);
  };

  std::vector<char> in_active(n_con, 0);
  int eq_cursor = 0;

  while (iterations < max_iter) {
    // pick the next violated constraint: equalities first (in order), then
    // the most violated bound
    int p = -1;
    double sp = 0.0;
    double psign = 1.0;
    if (eq_cursor < n_eq) {
      p = eq_cursor++;
      sp = slack(p);
      if (sp > 0.0) {
        psign = -1.0;
        sp = -sp;
      }
      if (sp > -kConstraintTol) {
        // already satisfied; still add it to the active set so it stays
        // enforced, unless dependent
        Eigen::VectorXd nv = psign * normal_of(p);
        if (qr.add(nv)) {
          active.push_back(p);
          sign.push_back(psign);
          mult.push_back(0.0);
          in_active[p] = 1;
        }
        continue;
      }
    } else {
      double worst = -kConstraintTol;
      for (int c = n_eq; c < n_con; ++c) {
        if (in_active[c]) continue;
        const double s = slack(c);
        if (s < worst) {
          worst = s;
          p = c;
        }
      }
      if (p < 0) break;  // optimal
      sp = worst;
    }

    Eigen::VectorXd np = psign * normal_of(p);

    // inner loop: take primal/dual steps until p becomes active
    bool added = false;
    while (iterations++ < max_iter) {
      const int q = qr.q;
      Eigen::VectorXd w = qr.Q.leftCols(q).transpose() * np;
      Eigen::VectorXd z = np - qr.Q.leftCols(q) * w;
      Eigen::VectorXd r;
      if (q > 0) {
        r = qr.R.topLeftCorner(q, q).triangularView<Eigen::Upper>().solve(w);
      }

      const double znorm2 = z.squaredNorm();
      const bool have_primal = znorm2 > 1e-20;

      // dual blocking step over active nonnegativity constraints
      double t1 = std::numeric_limits<double>::infinity();
      int blocker = -1;
      for (int j = 0; j < q; ++j) {
        if (active[j] < n_eq) continue;  // equalities are never dropped
        if (r[j] > kDualTol) {
          const double t = mult[j] / r[j];
          if (t < t1) {
            t1 = t;
            blocker = j;
          }
        }
      }
      double t2 = std::numeric_limits<double>::infinity();
      if (have_primal) t2 = -sp / z.dot(np);

      const double t = std::min(t1, t2);
      if (!std::isfinite(t)) {
        throw std::runtime_error("qp_project: infeasible subproblem (unexpected)");
      }

      if (have_primal) {
        x += t * z;
        sp += t * z.dot(np);
      }
      for (int j = 0; j < qr.q; ++j) mult[j] -= t * r[j];

      if (t == t2 && have_primal && t2 <= t1) {
        // full step; p joins the active set
        if (qr.add(np)) {
          active.push_back(p);
          sign.push_back(psign);
          mult.push_back(t);
          in_active[p] = 1;
        }
        added = true;
        break;
      }
      // partial (or pure dual) step; drop the blocking constraint
      if (blocker < 0) {
        throw std::runtime_error("qp_project: no blocking constraint in dual step");
      }
      in_active[active[blocker]] = 0;
      qr.drop(blocker);
      active.erase(active.begin() + blocker);
      sign.erase(sign.begin() + blocker);
      mult.erase(mult.begin() + blocker);
    }
    if (!added && iterations >= max_iter) {
      throw std::runtime_error("qp_project: iteration cap exhausted");
    }
  }
  if (iterations >= max_iter) throw std::runtime_error("qp_project: iteration cap exhausted");

  ProjectedTable out;
  out.m = m;
  out.iterations = iterations;
  out.x.assign(x.data(), x.data() + n);
  for (double& v : out.x) {
    if (v < 0.0 && v >= -kZeroSnap) v = 0.0;
  }
  int active_bounds = 0;
  for (int c : active) {
    if (c >= n_eq) ++active_bounds;
  }
  out.active_set_size = active_bounds;
  double obj = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = out.x[i] - table.a[i];
    obj += d * d;
  }
  out.objective = obj;
  return out;
}

}  // namespace bvine
