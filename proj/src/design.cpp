#include "twoin1/design.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "twoin1/normal.hpp"

namespace twoin1 {

namespace {
void fail(const std::string& msg) { throw std::invalid_argument(msg); }
}  // namespace

std::vector<std::string> validate(const DesignParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 0.5)) fail("DesignParams: alpha must lie in (0, 0.5)");
  if (!(p.power_target > 0.0 && p.power_target < 1.0))
    fail("DesignParams: power_target must lie in (0, 1)");
  if (!(p.m1 > 0.0)) fail("DesignParams: m1 must be positive");
  if (!(p.m2 > 0.0)) fail("DesignParams: m2 must be positive");
  if (!(p.m_total() <= p.m_max)) fail("DesignParams: m_max must be at least m1 + m2");
  if (!(p.rho_xy >= 0.0 && p.rho_xy < 1.0)) fail("DesignParams: rho_xy must lie in [0, 1)");
  if (!(p.rho_xz >= 0.0 && p.rho_xz < 1.0)) fail("DesignParams: rho_xz must lie in [0, 1)");
  if (!(p.m_phase2 >= p.m1)) fail("DesignParams: m_phase2 must be at least m1");
  if (!std::isfinite(p.c)) fail("DesignParams: c must be finite");

  std::vector<std::string> warnings;
  if (p.rho_xz > p.rho_xy) {
    warnings.push_back(
        "rho_xz > rho_xy: the type-I control argument assumes rho_xy >= rho_xz");
  }
  return warnings;
}

std::vector<std::string> validate(const EffectScenario& s) {
  if (!(s.hr_os > 0.0)) fail("EffectScenario: hr_os must be positive");
  if (!(s.hr_pfs > 0.0)) fail("EffectScenario: hr_pfs must be positive");
  if (!(s.orr_c > 0.0 && s.orr_c < 1.0)) fail("EffectScenario: orr_c must lie in (0, 1)");
  if (!(s.orr_t > 0.0 && s.orr_t < 1.0)) fail("EffectScenario: orr_t must lie in (0, 1)");
  if (s.n_per_arm_interim < 1) fail("EffectScenario: n_per_arm_interim must be at least 1");
  return {};
}

double info_fraction(const DesignParams& p) { return p.m1 / p.m_total(); }

double promising_threshold(const DesignParams& p) {
  double t = info_fraction(p);
  double za = std_normal_quantile(1.0 - p.alpha);
  double zb = std_normal_quantile(p.power_target);
  return za * std::sqrt(t) + zb * std::sqrt(t * (1.0 - t));
}

double conditional_power(double z1, double m2_star, const DesignParams& p) {
  if (!(m2_star > 0.0)) {
    std::ostringstream os;
    os << "conditional_power: m2_star = " << m2_star << " must be positive";
    throw std::domain_error(os.str());
  }
  double za = std_normal_quantile(1.0 - p.alpha);
  double b = (za * std::sqrt(p.m_total()) - z1 * std::sqrt(p.m1)) / std::sqrt(p.m2);
  // 1 - Phi(x) evaluated as Phi(-x): the upper tail would otherwise cancel
  return std_normal_cdf(z1 * std::sqrt(m2_star / p.m1) - b);
}

double ssr_events_uncapped(double z1, const DesignParams& p) {
  if (!(z1 > 0.0)) {
    throw std::domain_error("ssr_events_uncapped: requires z1 > 0");
  }
  double za = std_normal_quantile(1.0 - p.alpha);
  double zb = std_normal_quantile(p.power_target);
  double b = (za * std::sqrt(p.m_total()) - z1 * std::sqrt(p.m1)) / std::sqrt(p.m2);
  double r = (b + zb) / z1;
  return p.m1 * r * r;
}

SsrResult reestimate(double z1, const DesignParams& p) {
  SsrResult res{};
  res.cp_at_planned = conditional_power(z1, p.m2, p);
  double w = promising_threshold(p);
  double raw_m2;
  if (z1 >= w) {
    raw_m2 = p.m2;
    res.cap_hit = false;
  } else if (z1 <= 0.0) {
    raw_m2 = p.m_max - p.m1;
    res.cap_hit = true;
  } else {
    double uncapped = ssr_events_uncapped(z1, p);
    if (p.m1 + uncapped > p.m_max) {
      raw_m2 = p.m_max - p.m1;
      res.cap_hit = true;
    } else {
      raw_m2 = uncapped;
      res.cap_hit = false;
    }
  }
  res.m2_star_raw = raw_m2;
  res.m_star = static_cast<int>(std::llround(p.m1 + raw_m2));
  res.m2_star = res.m_star - static_cast<int>(std::llround(p.m1));
  return res;
}

double chw_statistic(double z1, double z2_incr, const DesignParams& p) {
  double m = p.m_total();
  return z1 * std::sqrt(p.m1 / m) + z2_incr * std::sqrt(p.m2 / m);
}

int logrank_events(double hr, const DesignParams& p) {
  if (!(hr > 0.0 && hr < 1.0)) {
    std::ostringstream os;
    os << "logrank_events: hr = " << hr << " must lie in (0, 1)";
    throw std::domain_error(os.str());
  }
  double za = std_normal_quantile(1.0 - p.alpha);
  double zb = std_normal_quantile(p.power_target);
  double lg = std::log(hr);
  double events = 4.0 * (za + zb) * (za + zb) / (lg * lg);
  return static_cast<int>(std::llround(events));
}

double orr_z_cutoff(double orr_c, double orr_t, int n_per_arm) {
  double var = orr_t * (1.0 - orr_t) / n_per_arm + orr_c * (1.0 - orr_c) / n_per_arm;
  if (orr_t == orr_c) return 0.0;
  return (orr_t - orr_c) / std::sqrt(var);
}

double logrank_drift(double hr, double events) {
  if (!(hr > 0.0)) throw std::domain_error("logrank_drift: hr must be positive");
  if (hr == 1.0) return 0.0;
  return 0.5 * std::sqrt(events) * std::log(1.0 / hr);
}

}  // namespace twoin1
