#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "twoin1/normal.hpp"
#include "twoin1/rng.hpp"
#include "twoin1/type1.hpp"

using namespace twoin1;

namespace {

DesignParams table2_design() { return DesignParams{}; }

// Frozen with a 256-panel reference evaluation of the same integrals.
constexpr double kPhase2AtZero = 0.0003479888556958762;
constexpr double kPhase3AtZero = 0.020357555763011313;
constexpr double kOverall2206 = 0.020817045869104277;
constexpr double kOverallM0596 = 0.02499715947381203;
constexpr double kCminTable2 = -0.5965115206773158;
constexpr double kCminRatio2T05 = -0.2946890912832727;  // -0.2947 in the design grid

}  // namespace

TEST_CASE("phase2 term limits") {
  DesignParams p = table2_design();
  CHECK(std::abs(phase2_term(8.0, p) - p.alpha) <= 1e-6);
  CHECK(std::abs(phase2_term(-8.0, p)) <= 1e-9);
  CHECK(std::abs(phase2_term(0.0, p) - kPhase2AtZero) <= 1e-9);
}

TEST_CASE("phase2 term matches a bivariate-normal Monte Carlo oracle") {
  // direct construction: X standard normal, Y = rho X + sqrt(1-rho^2) e
  DesignParams p = table2_design();
  double za = std_normal_quantile(1.0 - p.alpha);
  double s = std::sqrt(1.0 - p.rho_xy * p.rho_xy);
  const long n = 10'000'000;
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    ReplicateRng rng(424242, static_cast<std::uint64_t>(i));
    double x = rng.next_normal();
    double y = p.rho_xy * x + s * rng.next_normal();
    if (y > za && x <= 0.0) ++hits;
  }
  double mc = static_cast<double>(hits) / n;
  double se = std::sqrt(mc * (1.0 - mc) / n);
  CHECK(std::abs(phase2_term(0.0, p) - mc) <= 3.0 * se);
}

TEST_CASE("phase3 term limits") {
  DesignParams p = table2_design();
  // no re-estimation and an always-expand cutoff: conventional fixed test
  DesignParams fixed = p;
  fixed.m_max = fixed.m_total();
  CHECK(std::abs(phase3_term(-8.0, fixed) - p.alpha) <= 1e-5);
  CHECK(std::abs(phase3_term(8.0, p)) <= 1e-9);
  CHECK(std::abs(phase3_term(0.0, p) - kPhase3AtZero) <= 5e-9);
}

TEST_CASE("phase3 term matches the simulated-null oracle") {
  // draw Z1, then X | Z1, then the independent increment; re-estimate
  // without rounding (the analytic functional is continuous in events)
  DesignParams p = table2_design();
  double za = std_normal_quantile(1.0 - p.alpha);
  double w = promising_threshold(p);
  double sxz = std::sqrt(1.0 - p.rho_xz * p.rho_xz);
  const long n = 10'000'000;
  long hits_c0 = 0, hits_cm = 0;
  for (long i = 0; i < n; ++i) {
    ReplicateRng rng(171717, static_cast<std::uint64_t>(i));
    double z1 = rng.next_normal();
    double x = p.rho_xz * z1 + sxz * rng.next_normal();
    double incr = rng.next_normal();
    double raw_m2;
    if (z1 >= w) {
      raw_m2 = p.m2;
    } else if (z1 <= 0.0) {
      raw_m2 = p.m_max - p.m1;
    } else {
      raw_m2 = std::min(ssr_events_uncapped(z1, p), p.m_max - p.m1);
    }
    double m_star = p.m1 + raw_m2;
    double z2 = z1 * std::sqrt(p.m1 / m_star) + incr * std::sqrt(raw_m2 / m_star);
    if (z2 > za) {
      if (x > 0.0) ++hits_c0;
      if (x > -0.596) ++hits_cm;
    }
  }
  double mc0 = static_cast<double>(hits_c0) / n;
  double se0 = std::sqrt(mc0 * (1.0 - mc0) / n);
  CHECK(std::abs(phase3_term(0.0, p) - mc0) <= 3.0 * se0);
  double mcm = static_cast<double>(hits_cm) / n;
  double sem = std::sqrt(mcm * (1.0 - mcm) / n);
  CHECK(std::abs(phase3_term(-0.596, p) - mcm) <= 3.0 * sem);
}

TEST_CASE("overall type-I error values") {
  DesignParams p = table2_design();
  Type1Breakdown high = overall_type1(8.0, p);
  CHECK(std::abs(high.total - p.alpha) <= 1e-5);
  CHECK(high.total == high.phase2_term + high.phase3_term);

  Type1Breakdown at_cmin = overall_type1(-0.596, p);
  CHECK(std::abs(at_cmin.total - kOverallM0596) <= 5e-9);
  CHECK(std::abs(at_cmin.total - 0.025) <= 5e-4);

  CHECK(std::abs(overall_type1(2.206, p).total - kOverall2206) <= 5e-9);

  // equal correlations with an effectively unbounded cap inflate the error
  DesignParams inflate = p;
  inflate.rho_xy = 0.5;
  inflate.rho_xz = 0.5;
  inflate.m_max = 1e6 * inflate.m_total();
  CHECK(overall_type1(-1.0, inflate).total > p.alpha);
}

TEST_CASE("terms stay within [0,1] and move monotonically in c") {
  DesignParams p = table2_design();
  double prev2 = -1.0, prev3 = 2.0;
  for (double c = -4.0; c <= 4.0; c += 0.2) {
    Type1Breakdown b = overall_type1(c, p);
    CHECK(b.phase2_term >= 0.0);
    CHECK(b.phase2_term <= 1.0);
    CHECK(b.phase3_term >= 0.0);
    CHECK(b.phase3_term <= 1.0);
    CHECK(b.phase2_term >= prev2);
    CHECK(b.phase3_term <= prev3);
    prev2 = b.phase2_term;
    prev3 = b.phase3_term;
  }
}

TEST_CASE("panel refinement stays inside the declared tolerance") {
  DesignParams p = table2_design();
  QuadratureRule fine = QuadratureRule::gauss_legendre_unit(128, 16);
  for (double c : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    CHECK(std::abs(phase2_term(c, p) - phase2_term(c, p, fine)) <= 1e-8);
    CHECK(std::abs(phase3_term(c, p) - phase3_term(c, p, fine)) <= 1e-8);
  }
}

TEST_CASE("no-cap designs control the error for every cutoff") {
  for (auto [rxy, rxz] : {std::pair{0.7, 0.5}, std::pair{0.5, 0.5}}) {
    DesignParams p = table2_design();
    p.rho_xy = rxy;
    p.rho_xz = rxz;
    p.m_max = p.m_total();
    for (int i = 0; i <= 100; ++i) {
      double c = -6.0 + 12.0 * i / 100.0;
      CHECK(overall_type1(c, p).total <= p.alpha + 1e-4);
    }
  }
}

TEST_CASE("solve_cmin on the main design") {
  DesignParams p = table2_design();
  CminResult r = solve_cmin(p);
  REQUIRE(!r.unbounded_below());
  CHECK(std::abs(*r.c_min - kCminTable2) <= 1e-6);
  CHECK(std::abs(*r.c_min - (-0.596)) <= 0.01);
  CHECK(r.residual <= 1e-8);
  CHECK(r.crossings.size() == 1);
  // every cutoff above the solution keeps the error below alpha; the curve
  // is not monotone there (it dips and climbs back toward alpha) so the
  // whole range matters
  for (double c = *r.c_min + 0.05; c <= 6.0; c += 0.25) {
    CHECK(overall_type1(c, p).total < p.alpha);
  }
  CHECK(overall_type1(1.0, p).total < overall_type1(3.0, p).total);
}

TEST_CASE("solve_cmin sentinel when the cap equals the plan") {
  DesignParams p = table2_design();
  p.m_max = p.m_total();
  CminResult r = solve_cmin(p);
  CHECK(r.unbounded_below());
  CHECK(r.crossings.empty());
}

TEST_CASE("solve_cmin matches the published half-information cell") {
  DesignParams p = table2_design();
  p.m1 = 90;
  p.m2 = 90;
  p.m_max = 2.0 * p.m_total();
  CminResult r = solve_cmin(p);
  REQUIRE(!r.unbounded_below());
  CHECK(std::abs(*r.c_min - kCminRatio2T05) <= 1e-6);
  CHECK(std::abs(*r.c_min - (-0.2947)) <= 5e-4);
}

TEST_CASE("cmin is monotone in the cap ratio and in rho_xz") {
  DesignParams p = table2_design();
  double prev = -10.0;
  for (double ratio : {1.5, 2.0, 4.0}) {
    DesignParams q = p;
    q.m_max = ratio * q.m_total();
    double c = *solve_cmin(q).c_min;
    CHECK(c > prev);
    prev = c;
  }
  prev = -10.0;
  for (double rxz : {0.3, 0.4, 0.5}) {
    DesignParams q = p;
    q.rho_xz = rxz;
    double c = *solve_cmin(q).c_min;
    CHECK(c > prev);
    prev = c;
  }
  // widening the correlation gap at fixed rho_xz lowers the cutoff
  DesignParams narrow = p;
  narrow.rho_xy = 0.5;
  CHECK(*solve_cmin(p).c_min < *solve_cmin(narrow).c_min);
}

TEST_CASE("empirical_cmin input contract") {
  DesignParams p = table2_design();
  CHECK_THROWS_AS(empirical_cmin(p, 1000, 7), std::invalid_argument);
  CminScan coarse;
  coarse.step = 0.05;
  CHECK_THROWS_AS(empirical_cmin(p, 200000, 7, coarse), std::invalid_argument);
}

TEST_CASE("empirical_cmin sentinel under the reduced design") {
  DesignParams p = table2_design();
  p.m_max = p.m_total();
  CminResult r = empirical_cmin(p, 100000, 7);
  CHECK(r.unbounded_below());
}

TEST_CASE("empirical_cmin tracks the analytic solution") {
  DesignParams p = table2_design();
  CminResult emp = empirical_cmin(p, 200000, 20230815);
  REQUIRE(!emp.unbounded_below());
  CHECK(emp.method == CminMethod::empirical);
  // crossing-location noise at 2e5 replicates is ~0.09, keep a loose unit gate
  CHECK(std::abs(*emp.c_min - kCminTable2) <= 0.25);
}

TEST_CASE("analytic and empirical curves agree within Monte Carlo error") {
  DesignParams p = table2_design();
  std::vector<double> grid = {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  auto emp = empirical_type1_curve(p, grid, 200000, 99);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double ana = overall_type1(grid[i], p).total;
    CHECK(std::abs(ana - emp[i].first) <= 3.0 * emp[i].second);
  }
}
