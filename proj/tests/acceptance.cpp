// Acceptance suite: runs every design-level criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "twoin1/accrual.hpp"
#include "twoin1/design.hpp"
#include "twoin1/normal.hpp"
#include "twoin1/root_find.hpp"
#include "twoin1/sim.hpp"
#include "twoin1/type1.hpp"

using namespace twoin1;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& label, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %s — %s\n", ok ? "PASS" : "FAIL", criterion, label.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

bool within(double value, double target, double tol) {
  return std::abs(value - target) <= tol;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DesignParams table2_design() { return DesignParams{}; }

EffectScenario scenario(double hr_os, double hr_pfs, double orr_t) {
  EffectScenario s;
  s.hr_os = hr_os;
  s.hr_pfs = hr_pfs;
  s.orr_c = 0.1;
  s.orr_t = orr_t;
  return s;
}

char buf[512];

void criterion1() {
  DesignParams p = table2_design();
  int e55 = logrank_events(0.55, p);
  int e617 = logrank_events(0.617, p);
  int e70 = logrank_events(0.7, p);
  bool ok = e55 == 118 && e617 == 180 && e70 == 330;
  std::snprintf(buf, sizeof buf, "got %d / %d / %d, want 118 / 180 / 330 exactly", e55,
                e617, e70);
  report(1, "event sizes for HR 0.55 / 0.617 / 0.7", ok, buf);
}

void criterion2() {
  double z = orr_z_cutoff(0.1, 0.25, 60);
  std::snprintf(buf, sizeof buf, "got %.4f, want 2.206 +/- 0.001", z);
  report(2, "interim ORR cutoff statistic", within(z, 2.206, 1e-3), buf);
}

void criterion3() {
  DesignParams p = table2_design();
  auto t0 = std::chrono::steady_clock::now();
  CminResult analytic = solve_cmin(p);
  double analytic_s = seconds_since(t0);
  bool ok_a = !analytic.unbounded_below() && within(*analytic.c_min, -0.596, 0.01) &&
              analytic_s < 1.0;

  t0 = std::chrono::steady_clock::now();
  CminResult empirical = empirical_cmin(p, 1000000, 20230815);
  double empirical_s = seconds_since(t0);
  bool ok_e = !empirical.unbounded_below() &&
              std::abs(*empirical.c_min - *analytic.c_min) <= 0.05 && empirical_s < 120.0;
  std::snprintf(buf, sizeof buf,
                "analytic %.4f (%.2fs), empirical %.4f (%.2fs), want -0.596 +/- 0.01 and "
                "|emp - ana| <= 0.05",
                analytic.c_min.value_or(NAN), analytic_s, empirical.c_min.value_or(NAN),
                empirical_s);
  report(3, "minimal safe cutoff, analytic and empirical", ok_a && ok_e, buf);
}

void criterion4() {
  DesignParams p = table2_design();
  auto gap = [&](double z1) { return conditional_power(z1, p.m2, p) - 0.813; };
  double z1 = find_root(gap, make_bracket(gap, 0.2, promising_threshold(p)), 1e-12);
  SsrResult r = reestimate(z1, p);
  bool ok = r.m2_star >= 166 && r.m2_star <= 168;
  std::snprintf(buf, sizeof buf, "z1 = %.5f from CP = 0.813, re-estimated %d events, want 167 +/- 1",
                z1, r.m2_star);
  report(4, "case-study re-estimation chain", ok, buf);
}

void criterion5() {
  DesignParams p = table2_design();
  EffectScenario null_s = scenario(1.0, 1.0, 0.1);
  SimOptions opt;
  opt.replicates = 100000;
  opt.seed = 20230815;

  DesignParams high = p;
  high.c = 2.206;
  DesignSet at_high = run_designs(null_s, high, opt);
  bool ok = within(at_high.f2in1.p_expand, 0.0133, 0.0025) &&
            within(at_high.f2in1.power_overall, 0.0204, 0.002) &&
            within(at_high.s2in1_planned.power_overall, 0.0204, 0.002) &&
            within(at_high.s2in1_max.power_overall, 0.0201, 0.002);

  DesignParams low = p;
  low.c = -0.596;
  DesignSet at_low = run_designs(null_s, low, opt);
  ok = ok && within(at_low.f2in1.p_expand, 0.7244, 0.01) &&
       within(at_low.f2in1.power_overall, 0.0256, 0.002);

  std::snprintf(buf, sizeof buf,
                "c=2.206: P(exp) %.4f, type-I F2in1 %.4f / S2in1-180 %.4f / S2in1-330 %.4f; "
                "c=-0.596: P(exp) %.4f, F2in1 %.4f",
                at_high.f2in1.p_expand, at_high.f2in1.power_overall,
                at_high.s2in1_planned.power_overall, at_high.s2in1_max.power_overall,
                at_low.f2in1.p_expand, at_low.f2in1.power_overall);
  report(5, "null operating characteristics at both cutoffs", ok, buf);
}

void criterion6() {
  DesignParams p = table2_design();
  SimOptions opt;
  opt.replicates = 10000;
  opt.seed = 20230815;
  DesignSet set = run_designs(scenario(0.55, 0.55, 0.3), p, opt);
  bool ok = within(set.f2in1.power_overall, 0.919, 0.01) &&
            within(set.f2in1.expected_events_overall, 179.0, 5.0) &&
            within(set.s2in1_max.power_overall, 0.921, 0.01) &&
            within(set.s2in1_max.expected_events_overall, 273.0, 5.0) &&
            set.f2in1.power_phase3_cond >= 0.99 &&
            within(set.f2in1.expected_events_phase3, 201.0, 5.0) &&
            within(set.f2in1_chw.power_phase3_cond, 0.997, 0.005);
  std::snprintf(buf, sizeof buf,
                "F2in1 %.4f / %.1f ev; S2in1-330 %.4f / %.1f ev; cond F2in1 %.4f / %.1f ev; "
                "CHW cond %.4f",
                set.f2in1.power_overall, set.f2in1.expected_events_overall,
                set.s2in1_max.power_overall, set.s2in1_max.expected_events_overall,
                set.f2in1.power_phase3_cond, set.f2in1.expected_events_phase3,
                set.f2in1_chw.power_phase3_cond);
  report(6, "strong-alternative operating characteristics", ok, buf);
}

void criterion7() {
  DesignParams p = table2_design();
  SimOptions opt;
  opt.replicates = 10000;
  opt.seed = 20230815;
  DesignSet set = run_designs(scenario(0.7, 0.55, 0.3), p, opt);
  bool ok = within(set.f2in1.power_overall, 0.816, 0.015) &&
            within(set.f2in1.power_phase3_cond, 0.858, 0.015) &&
            within(set.f2in1.expected_events_phase3, 248.0, 6.0) &&
            within(set.f2in1_chw.power_phase3_cond, 0.852, 0.015);
  std::snprintf(buf, sizeof buf,
                "F2in1 overall %.4f, cond %.4f, cond events %.1f, CHW cond %.4f",
                set.f2in1.power_overall, set.f2in1.power_phase3_cond,
                set.f2in1.expected_events_phase3, set.f2in1_chw.power_phase3_cond);
  report(7, "discordant-endpoint operating characteristics", ok, buf);
}

void criterion8() {
  DesignParams p = table2_design();
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(-1.0 + i * 0.4);
  auto emp = empirical_type1_curve(p, grid, 1000000, 20230815);
  bool ok = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double ana = overall_type1(grid[i], p).total;
    double gap = std::abs(ana - emp[i].first) / emp[i].second;
    worst = std::max(worst, gap);
    if (gap > 3.0) ok = false;
  }
  std::snprintf(buf, sizeof buf, "worst |analytic - empirical| = %.2f se over 10 cutoffs",
                worst);
  report(8, "analytic curve matches the simulated null", ok, buf);
}

void criterion9() {
  DesignParams p = table2_design();
  bool ok = true;
  std::string notes;

  // (a) cap at the plan: analytic control and replicate-level reduction
  DesignParams reduced = p;
  reduced.m_max = reduced.m_total();
  reduced.c = -0.5;
  for (int i = 0; i <= 100 && ok; ++i) {
    double c = -6.0 + 12.0 * i / 100.0;
    if (overall_type1(c, reduced).total > p.alpha + 1e-4) {
      ok = false;
      notes += "(a) analytic control failed; ";
    }
  }
  EffectScenario null_s = scenario(1.0, 1.0, 0.1);
  for (long i = 0; i < 100000 && ok; ++i) {
    ReplicateRng rng(20230815, static_cast<std::uint64_t>(i));
    StatisticDraw d = draw_replicate(null_s, reduced, rng);
    TrialOutcome flex = run_f2in1(d, null_s, reduced);
    TrialOutcome fixed = run_s2in1(d, null_s, reduced, reduced.m_total());
    if (flex.rejected != fixed.rejected || flex.m_final != fixed.m_final) {
      ok = false;
      notes += "(a) replicate-level reduction failed; ";
    }
  }

  // (b) continuity of the re-estimation rule at the boundary
  double w = promising_threshold(p);
  double gap = std::abs(reestimate(w - 1e-9, p).m2_star_raw - p.m2);
  if (!(gap < 1e-6)) {
    ok = false;
    notes += "(b) continuity gap " + std::to_string(gap) + "; ";
  }

  // (c) conditional-power inversion on the open interval
  for (double z1 = 0.2; z1 < w; z1 += 0.01) {
    if (!within(conditional_power(z1, ssr_events_uncapped(z1, p), p), 0.9, 1e-6)) {
      ok = false;
      notes += "(c) inversion failed at z1=" + std::to_string(z1) + "; ";
      break;
    }
  }

  // (d) monotone cutoff over the published grid
  const double ratios[5] = {1.5, 2.0, 4.0, 8.0, 1e6};
  for (double rxy : {0.5, 0.7}) {
    for (double rxz : {0.3, 0.4, 0.5}) {
      double prev = -10.0;
      for (double ratio : ratios) {
        DesignParams q = p;
        q.rho_xy = rxy;
        q.rho_xz = rxz;
        q.m_max = ratio * q.m_total();
        CminResult r = solve_cmin(q);
        if (r.unbounded_below() || *r.c_min <= prev) {
          ok = false;
          notes += "(d) ratio monotonicity failed; ";
        }
        if (!r.unbounded_below()) prev = *r.c_min;
      }
    }
  }
  for (double rxy : {0.5, 0.7}) {
    for (double ratio : {2.0, 4.0}) {
      double prev = -10.0;
      for (double rxz : {0.3, 0.4, 0.5}) {
        DesignParams q = p;
        q.rho_xy = rxy;
        q.rho_xz = rxz;
        q.m_max = ratio * q.m_total();
        double c = *solve_cmin(q).c_min;
        if (c <= prev) {
          ok = false;
          notes += "(d) rho_xz monotonicity failed; ";
        }
        prev = c;
      }
    }
  }

  // (e) determinism across worker counts
  EffectScenario alt = scenario(0.7, 0.7, 0.25);
  SimOptions opt;
  opt.replicates = 50000;
  opt.seed = 20230815;
  opt.threads = 1;
  DesignSet one = run_designs(alt, p, opt);
  for (int threads : {2, 7}) {
    SimOptions multi = opt;
    multi.threads = threads;
    DesignSet many = run_designs(alt, p, multi);
    if (many.f2in1.power_overall != one.f2in1.power_overall ||
        many.f2in1.expected_events_overall != one.f2in1.expected_events_overall ||
        many.f2in1_chw.power_overall != one.f2in1_chw.power_overall ||
        many.s2in1_max.power_overall != one.s2in1_max.power_overall) {
      ok = false;
      notes += "(e) thread determinism failed; ";
    }
  }

  if (notes.empty()) notes = "reduction, continuity, inversion, monotonicity, determinism";
  report(9, "property suite", ok, notes);
}

void criterion10() {
  // Not desk-reproducible as hard numbers; report the diagnostics instead.
  DesignParams p = table2_design();

  // best-matching information fraction for the published cutoff grid
  const double ratios[4] = {1.5, 2.0, 4.0, 8.0};
  const double published[6][4] = {
      // rows: (rho_xy, rho_xz) in the order below; columns: ratios above
      {-0.2737, -0.0603, 0.1683, 0.2665},  // 0.5, 0.5
      {-0.5240, -0.2963, -0.0396, 0.0755}, // 0.5, 0.4
      {-0.7309, -0.4946, -0.2148, -0.0862},// 0.5, 0.3
      {-0.4764, -0.2947, -0.0989, -0.0140},// 0.7, 0.5
      {-0.6412, -0.4423, -0.2209, -0.1223},// 0.7, 0.4
      {-0.8005, -0.5877, -0.3411, -0.2296} // 0.7, 0.3
  };
  const double rho_pairs[6][2] = {{0.5, 0.5}, {0.5, 0.4}, {0.5, 0.3},
                                  {0.7, 0.5}, {0.7, 0.4}, {0.7, 0.3}};
  double best_t = 0.0, best_dev = 1e9;
  for (double t : {0.25, 1.0 / 3.0, 0.5}) {
    double worst = 0.0;
    for (int pr = 0; pr < 6; ++pr) {
      for (int ri = 0; ri < 4; ++ri) {
        DesignParams q = p;
        double m_total = q.m_total();
        q.rho_xy = rho_pairs[pr][0];
        q.rho_xz = rho_pairs[pr][1];
        q.m1 = t * m_total;
        q.m2 = m_total - q.m1;
        q.m_max = ratios[ri] * m_total;
        CminResult r = solve_cmin(q);
        double dev = r.unbounded_below() ? 1.0 : std::abs(*r.c_min - published[pr][ri]);
        worst = std::max(worst, dev);
      }
    }
    if (worst < best_dev) {
      best_dev = worst;
      best_t = t;
    }
  }

  // duration direction-of-effect under the calibrated accrual assumptions
  AccrualSetup setup;
  EffectScenario alt = scenario(0.55, 0.55, 0.3);
  bool direction = true;
  double prev = 0.0;
  for (double target : {180.0, 201.0, 248.0, 330.0}) {
    double d = expected_duration(target, alt, setup.model, setup.patients_phase3_cap,
                                 SurvivalEndpoint::os);
    if (d <= prev) direction = false;
    prev = d;
  }

  bool ok = direction && best_dev < 0.05;
  std::snprintf(buf, sizeof buf,
                "published cutoff grid best matched at t = %.4f (max dev %.4f over 24 finite "
                "cells; unbounded-cap column is surrogate-dependent); duration increases "
                "with the event target",
                best_t, best_dev);
  report(10, "report-only diagnostics", ok, buf);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
