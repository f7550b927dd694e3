#pragma once

#include <stdexcept>

#include "twoin1/design.hpp"

namespace twoin1 {

// Enrollment and survival assumptions behind the study-duration columns.
// The trial readouts themselves never depend on these; durations are an
// assumption-dependent overlay and are flagged as such in every output.
struct AccrualModel {
  double rate = 12.0;                 // patients enrolled per month
  double control_median_os = 14.763;  // months; exponential survival
  double control_median_pfs = 12.975; // months; exponential survival
};

// AccrualModel plus the per-stage enrollment caps the duration solver needs.
struct AccrualSetup {
  AccrualModel model;
  int patients_phase2_cap = 220;
  int patients_phase3_cap = 500;
};

std::vector<std::string> validate(const AccrualSetup& a);

enum class SurvivalEndpoint { os, pfs };

// Raised when the event target exceeds what the enrollment cap can ever
// deliver; carries the asymptotic maximum.
class SaturationError : public std::runtime_error {
 public:
  SaturationError(const std::string& msg, double max_events_reachable)
      : std::runtime_error(msg), max_events(max_events_reachable) {}
  double max_events;
};

// Smallest calendar time T at which the expected event count reaches
// m_target: patients enroll one every 1/rate months up to n_cap, each arm
// follows its exponential survival (treatment hazard = hr * control hazard),
// and a patient enrolled at e contributes 1 - S(T - e) expected events.
double expected_duration(double m_target, const EffectScenario& scenario,
                         const AccrualModel& accrual, int n_cap,
                         SurvivalEndpoint endpoint);

}  // namespace twoin1
