#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twoin1/accrual.hpp"
#include "twoin1/design.hpp"
#include "twoin1/rng.hpp"

namespace twoin1 {

// One replicate's statistics. x, y, z1 carry their scenario drifts;
// z2_incr_unit is the unit innovation of the post-interim increment -- its
// drift depends on the re-estimated size and is applied by the design runs.
struct StatisticDraw {
  double x;
  double y;
  double z1;
  double z2_incr_unit;
};

enum class DesignLabel { f2in1, s2in1_planned, s2in1_max, f2in1_chw };

std::string design_label_name(DesignLabel label, const DesignParams& p);

struct TrialOutcome {
  bool expanded;    // X > c at the interim
  int m_final;      // events at the final analysis
  bool rejected;
  DesignLabel design;
  std::optional<double> duration_months;
};

struct OCSummary {
  long n = 0;
  long n_expand = 0;
  double p_expand = 0.0, p_expand_se = 0.0;
  double power_overall = 0.0, power_overall_se = 0.0;
  // conditional values are NaN when the branch is empty
  double power_phase2_cond = 0.0, power_phase2_cond_se = 0.0;
  double power_phase3_cond = 0.0, power_phase3_cond_se = 0.0;
  double expected_events_overall = 0.0;
  double expected_events_phase2 = 0.0;
  double expected_events_phase3 = 0.0;
  std::optional<double> expected_duration_overall;
  std::optional<double> expected_duration_phase2;
  std::optional<double> expected_duration_phase3;
};

// Draws (x, y, z1) as correlated unit-variance normals with the scenario
// drifts, plus the independent post-interim innovation. corr(x,y) = rho_xy,
// corr(x,z1) = rho_xz, corr(y,z1) = rho_xy * rho_xz (y and z1 conditionally
// independent given x).
StatisticDraw draw_replicate(const EffectScenario& scenario, const DesignParams& p,
                             ReplicateRng& rng);

// Flexible design: re-estimate on expansion, conventional pooled final test.
TrialOutcome run_f2in1(const StatisticDraw& draw, const EffectScenario& scenario,
                       const DesignParams& p);

// Benchmark with a fixed phase-3 event size (no re-estimation).
TrialOutcome run_s2in1(const StatisticDraw& draw, const EffectScenario& scenario,
                       const DesignParams& p, double m_phase3);

// Same adaptation as run_f2in1 but the final test combines the stages with
// the pre-specified planned weights.
TrialOutcome run_chw(const StatisticDraw& draw, const EffectScenario& scenario,
                     const DesignParams& p);

// Sample proportions/means with binomial standard errors over outcomes of a
// single design. Throws std::domain_error on an empty list. Durations are
// summarized only when every outcome carries one.
OCSummary aggregate(const std::vector<TrialOutcome>& outcomes);

struct SimOptions {
  long replicates = 10000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: TWOIN1_THREADS, then hardware_concurrency
  std::optional<AccrualSetup> accrual;
};

// Operating characteristics of the four designs on shared draws (common
// random numbers). Deterministic for fixed (seed, replicates) regardless of
// the thread count: replicate streams are counter-based and every tallied
// quantity is integer-valued until the final division.
struct DesignSet {
  OCSummary f2in1;
  OCSummary s2in1_planned;  // fixed total m1 + m2
  OCSummary s2in1_max;      // fixed total m_max
  OCSummary f2in1_chw;
};

DesignSet run_designs(const EffectScenario& scenario, const DesignParams& p,
                      const SimOptions& options);

int resolve_threads(int requested);

}  // namespace twoin1
