#pragma once

#include <vector>

#include "bvine/empirical.hpp"

namespace bvine {

struct ProjectedTable {
  int m = 0;
  std::vector<double> x;  // row-major m*m, nonnegative, uniform margins 1/m
  double objective = 0.0;  // sum (x - a)^2
  int active_set_size = 0;  // nonnegativity constraints active at the solution
  int iterations = 0;

  double at(int k, int l) const { return x[static_cast<std::size_t>(k) * m + l]; }
};

/// Closed-form Lagrange correction x_ij = a_ij - a_.j/m - a_i./m + 2/m^2.
/// Margins come out uniform but entries may be negative.
std::vector<double> lagrange_project(const ContingencyTable& a);

/// Feasible benchmark built on the closed form: alternate the margin
/// correction with clipping of negative entries until the table is
/// nonnegative. Always at least as far from `a` as the QP projection.
std::vector<double> iterated_lagrange(const ContingencyTable& a, int max_rounds = 1000);

/// Euclidean projection of the table onto { x >= 0, all margins = 1/m },
/// solved with the Goldfarb-Idnani dual active-set method. The identity
/// Hessian makes every internal step an orthogonal projection; one margin
/// equality is dropped since the constraints are linearly dependent given
/// sum(a) = 1.
ProjectedTable qp_project(const ContingencyTable& a);

}  // namespace bvine
