#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace twoin1 {

// Fixed quadrature rule on the open unit interval. All nodes are strictly
// inside (0, 1) -- the transformed integrands used by the type-I machinery
// are singular at the endpoints and must never be evaluated there.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  // Composite Gauss-Legendre: `panels` equal panels, `points` nodes each.
  static QuadratureRule gauss_legendre_unit(int panels = 64, int points = 16);
};

// Shared default rule (64 panels x 16 points).
const QuadratureRule& default_rule();

// Weighted sum of f over the rule. Throws std::runtime_error if f is
// non-finite at any node, reporting the node location.
template <class F>
double integrate_unit(F&& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrate_unit: non-finite integrand value at node s = " << rule.nodes[i];
      throw std::runtime_error(os.str());
    }
    acc += rule.weights[i] * v;
  }
  return acc;
}

template <class F>
double integrate_unit(F&& f) {
  return integrate_unit(static_cast<F&&>(f), default_rule());
}

}  // namespace twoin1
