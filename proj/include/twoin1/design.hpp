#pragma once

#include <string>
#include <vector>

namespace twoin1 {

// Fixed design quantities, all on the event ("information units") scale.
// Event counts are stored as reals so that ratio-style settings such as
// m_max/m_total = 1e6 (the unbounded-cap surrogate) stay representable;
// the simulator rounds to whole events only after re-estimation.
struct DesignParams {
  double alpha = 0.025;         // one-sided significance level
  double power_target = 0.9;    // 1 - beta
  double m1 = 60.0;             // events observed at the interim look
  double m2 = 120.0;            // planned post-interim events
  double m_max = 330.0;         // cap on total events after re-estimation
  double rho_xy = 0.7;          // corr(X, Y)
  double rho_xz = 0.5;          // corr(X, Z1)
  double c = 2.206;             // interim decision cutoff on the X scale
  double m_phase2 = 118.0;      // events at the phase-2 final analysis

  double m_total() const { return m1 + m2; }
};

// Throws std::invalid_argument on hard violations; returns warnings for
// soft ones (rho_xz > rho_xy breaks the usual ordering assumption but is
// an explorable setting, not an error).
std::vector<std::string> validate(const DesignParams& p);

// True-state description for one simulation scenario.
struct EffectScenario {
  double hr_os = 1.0;           // hazard ratio, phase-3 endpoint
  double hr_pfs = 1.0;          // hazard ratio, phase-2 endpoint
  double orr_c = 0.1;           // control response probability
  double orr_t = 0.1;           // treatment response probability
  int n_per_arm_interim = 60;   // subjects per arm behind the interim ORR statistic

  bool is_null() const { return hr_os == 1.0 && hr_pfs == 1.0 && orr_t == orr_c; }
};

std::vector<std::string> validate(const EffectScenario& s);

struct SsrResult {
  double m2_star_raw;   // post-interim events before rounding (cap applied)
  int m2_star;          // post-interim events, rounded
  int m_star;           // total events at the final analysis, rounded
  bool cap_hit;         // min(m_max, .) was binding
  double cp_at_planned; // conditional power at the planned m2
};

// t = m1 / (m1 + m2).
double info_fraction(const DesignParams& p);

// W = Z_{1-alpha} sqrt(t) + Z_{1-beta} sqrt(t(1-t)); re-estimation triggers
// below this interim value.
double promising_threshold(const DesignParams& p);

// Conditional power of the final analysis given interim value z1 and a
// post-interim commitment of m2_star events. The rejection threshold for
// the post-interim increment comes from the planned design (m_total, m2);
// the interim trend z1 supplies the drift at m2_star. This is the reading
// under which the re-estimation formula below is its exact inverse.
double conditional_power(double z1, double m2_star, const DesignParams& p);

// Post-interim events solving conditional_power(z1, .) = power_target,
// before the cap. Requires z1 > 0.
double ssr_events_uncapped(double z1, const DesignParams& p);

// Sample-size re-estimation rule: keep m2 when z1 >= W, otherwise solve for
// the target conditional power and cap the total at m_max. A non-positive
// z1 below W commits the maximum (the uncapped formula explodes there).
SsrResult reestimate(double z1, const DesignParams& p);

// Weighted combination statistic with pre-specified weights from the
// planned m1, m2 -- never from re-estimated sizes.
double chw_statistic(double z1, double z2_incr, const DesignParams& p);

// Events needed by a 1:1 log-rank comparison to detect `hr` at the design's
// alpha and power: nearest integer of 4 (Z_{1-alpha}+Z_{1-beta})^2 / ln(hr)^2.
int logrank_events(double hr, const DesignParams& p);

// Two-proportion z statistic with unpooled variance.
double orr_z_cutoff(double orr_c, double orr_t, int n_per_arm);

// Mean of the log-rank statistic at `events`: (sqrt(events)/2) ln(1/hr).
double logrank_drift(double hr, double events);

}  // namespace twoin1
