#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twoin1/design.hpp"
#include "twoin1/quadrature.hpp"

namespace twoin1 {

struct Type1Breakdown {
  double phase2_term;  // Pr(Y > Z_{1-a}, X <= c) under the global null
  double phase3_term;  // Pr(Z2 > Z_{1-a}, X > c) with re-estimation active
  double total;        // sum of the two
};

enum class CminMethod { analytic, empirical };

struct CminResult {
  // Empty when the type-I curve stays below alpha on the whole scan range
  // (unbounded below: every cutoff controls the error).
  std::optional<double> c_min;
  double residual = 0.0;  // |type1(c_min) - alpha| at the reported root
  CminMethod method = CminMethod::analytic;
  std::vector<double> crossings;  // all downward crossings found; c_min is the largest

  bool unbounded_below() const { return !c_min.has_value(); }
};

struct CminScan {
  double lo = -6.0;
  double hi = 6.0;
  double step = 0.05;
  double tol = 1e-8;
};

// Probability of a false phase-2 rejection: the lower-tail integral of
// Phi((rho_xy x - Z_{1-a}) / sqrt(1-rho_xy^2)) phi(x) over x <= c, mapped
// to the unit interval through x = c - (1-s)/s.
double phase2_term(double c, const DesignParams& p, const QuadratureRule& rule);
double phase2_term(double c, const DesignParams& p);

// Probability of a false phase-3 rejection with the conventional pooled
// final test. X and Z2 decouple given Z1, so the integral over z1 splits at
// the promising threshold W: above W the planned size applies; below it the
// re-estimated, capped size enters the rejection boundary.
double phase3_term(double c, const DesignParams& p, const QuadratureRule& rule);
double phase3_term(double c, const DesignParams& p);

Type1Breakdown overall_type1(double c, const DesignParams& p, const QuadratureRule& rule);
Type1Breakdown overall_type1(double c, const DesignParams& p);

// Largest c at which the analytic type-I curve crosses alpha downward, so
// that every cutoff above it keeps the error below alpha. Scan grid plus
// root polishing; empty result when the curve never reaches alpha.
CminResult solve_cmin(const DesignParams& p, const QuadratureRule& rule,
                      const CminScan& scan = {});
CminResult solve_cmin(const DesignParams& p);

// Same quantity from the empirical null distribution: `replicates` draws of
// the full design under the null (shared across the whole c grid), grid
// step <= 0.005. Deterministic for a fixed seed. Requires replicates >= 1e5.
CminResult empirical_cmin(const DesignParams& p, long replicates, std::uint64_t seed,
                          const CminScan& scan = {.step = 0.005});

// Empirical overall type-I error at each cutoff, one pass over `replicates`
// null draws. Returns pairs (rejection probability, binomial se).
std::vector<std::pair<double, double>> empirical_type1_curve(
    const DesignParams& p, const std::vector<double>& c_grid, long replicates,
    std::uint64_t seed);

}  // namespace twoin1
