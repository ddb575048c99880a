#pragma once

#include <string>
#include <variant>

#include "bvine/bernstein.hpp"
#include "bvine/families.hpp"

namespace bvine {

/// A vine edge holds either a parametric family or a Bernstein copula and
/// exposes the common evaluator surface the tree recursions need.
class PairCopula {
 public:
  PairCopula() : impl_(ParametricPairCopula{}) {}
  PairCopula(ParametricPairCopula c) : impl_(std::move(c)) {}
  PairCopula(BernsteinCopula c) : impl_(std::move(c)) {}

  bool is_parametric() const { return std::holds_alternative<ParametricPairCopula>(impl_); }
  const ParametricPairCopula& parametric() const { return std::get<ParametricPairCopula>(impl_); }
  const BernsteinCopula& bernstein() const { return std::get<BernsteinCopula>(impl_); }

  double cdf(double u, double v) const;
  double density(double u, double v) const;
  double log_density(double u, double v) const;
  double h1(double v, double u) const;
  double h2(double u, double v) const;
  double h1_inverse(double w, double u) const;
  double h2_inverse(double w, double v) const;

  std::string describe() const;

 private:
  std::variant<ParametricPairCopula, BernsteinCopula> impl_;
};

}  // namespace bvine
