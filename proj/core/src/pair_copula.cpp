#include "bvine/pair_copula.hpp"

#include <cmath>

#include "bvine/io.hpp"

namespace bvine {

double PairCopula::cdf(double u, double v) const {
  if (is_parametric()) return bvine::cdf(parametric(), u, v);
  return bernstein().cdf(u, v);
}

double PairCopula::density(double u, double v) const {
  if (is_parametric()) return bvine::density(parametric(), u, v);
  return bernstein().density(u, v);
}

double PairCopula::log_density(double u, double v) const {
  if (is_parametric()) return bvine::log_density(parametric(), u, v);
  return std::log(bernstein().density(u, v));
}

double PairCopula::h1(double v, double u) const {
  if (is_parametric()) return bvine::h1(parametric(), v, u);
  return bernstein().h1(v, u);
}

double PairCopula::h2(double u, double v) const {
  if (is_parametric()) return bvine::h2(parametric(), u, v);
  return bernstein().h2(u, v);
}

double PairCopula::h1_inverse(double w, double u) const {
  if (is_parametric()) return bvine::h1_inverse(parametric(), w, u);
  return bernstein().h1_inverse(w, u);
}

double PairCopula::h2_inverse(double w, double v) const {
  if (is_parametric()) return bvine::h2_inverse(parametric(), w, v);
  return bernstein().h2_inverse(w, v);
}

std::string PairCopula::describe() const {
  if (is_parametric()) {
    const auto& c = parametric();
    std::string s = family_name(c.family);
    if (c.family == FamilyId::Independence) return s;
    s += " theta=" + io::format_full(c.theta);
    if (c.family == FamilyId::StudentT) s += " nu=" + io::format_full(c.nu);
    return s;
  }
  return "bernstein m=" + std::to_string(bernstein().grid_size());
}

}  // namespace bvine
