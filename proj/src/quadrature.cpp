#include "twoin1/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace twoin1 {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre_base(int n, std::vector<double>& x, std::vector<double>& w) {
  constexpr double kPi = 3.14159265358979323846;
  constexpr double kEps = 1e-15;
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace

QuadratureRule QuadratureRule::gauss_legendre_unit(int panels, int points) {
  if (panels < 1 || points < 1) {
    throw std::invalid_argument("gauss_legendre_unit: panels and points must be positive");
  }
  std::vector<double> bx, bw;
  gauss_legendre_base(points, bx, bw);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * points);
  rule.weights.reserve(static_cast<std::size_t>(panels) * points);
  double h = 1.0 / panels;
  for (int j = 0; j < panels; ++j) {
    double mid = (j + 0.5) * h;
    for (int k = 0; k < points; ++k) {
      rule.nodes.push_back(mid + 0.5 * h * bx[k]);
      rule.weights.push_back(0.5 * h * bw[k]);
    }
  }
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = QuadratureRule::gauss_legendre_unit();
  return rule;
}

}  // namespace twoin1
