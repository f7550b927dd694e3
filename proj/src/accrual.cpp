#include "twoin1/accrual.hpp"

#include <cmath>
#include <sstream>

#include "twoin1/root_find.hpp"

namespace twoin1 {

std::vector<std::string> validate(const AccrualSetup& a) {
  if (!(a.model.rate > 0.0)) throw std::invalid_argument("AccrualModel: rate must be positive");
  if (!(a.model.control_median_os > 0.0))
    throw std::invalid_argument("AccrualModel: control_median_os must be positive");
  if (!(a.model.control_median_pfs > 0.0))
    throw std::invalid_argument("AccrualModel: control_median_pfs must be positive");
  if (a.patients_phase2_cap < 1 || a.patients_phase3_cap < 1)
    throw std::invalid_argument("AccrualSetup: patient caps must be positive");
  return {};
}

namespace {

double expected_events_at(double T, double rate, int n_cap, double lam_c, double lam_t) {
  double acc = 0.0;
  for (int i = 1; i <= n_cap; ++i) {
    double fu = T - i / rate;
    if (fu < 0.0) break;
    acc += 1.0 - 0.5 * (std::exp(-lam_c * fu) + std::exp(-lam_t * fu));
  }
  return acc;
}

}  // namespace

double expected_duration(double m_target, const EffectScenario& scenario,
                         const AccrualModel& accrual, int n_cap,
                         SurvivalEndpoint endpoint) {
  if (m_target < 0.0) throw std::invalid_argument("expected_duration: negative target");
  if (m_target == 0.0) return 0.0;

  double median = endpoint == SurvivalEndpoint::os ? accrual.control_median_os
                                                   : accrual.control_median_pfs;
  double hr = endpoint == SurvivalEndpoint::os ? scenario.hr_os : scenario.hr_pfs;
  double lam_c = std::log(2.0) / median;
  double lam_t = hr * lam_c;

  if (m_target >= static_cast<double>(n_cap)) {
    std::ostringstream os;
    os << "expected_duration: target " << m_target << " events unreachable with "
       << n_cap << " patients";
    throw SaturationError(os.str(), static_cast<double>(n_cap));
  }

  auto deficit = [&](double T) {
    return expected_events_at(T, accrual.rate, n_cap, lam_c, lam_t) - m_target;
  };
  double hi = 1.0;
  while (deficit(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e7) {
      throw SaturationError("expected_duration: no finite horizon reaches the target",
                            static_cast<double>(n_cap));
    }
  }
  return find_root(deficit, Bracket{0.0, hi, -m_target, deficit(hi)}, 1e-9);
}

}  // namespace twoin1
