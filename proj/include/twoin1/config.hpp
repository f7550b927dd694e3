#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twoin1/accrual.hpp"
#include "twoin1/design.hpp"

namespace twoin1 {

// Schema violations, unknown keys, out-of-range values. Maps to exit code 2.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NamedScenario {
  std::string name;
  EffectScenario scenario;
  std::optional<long> replicates;  // per-scenario override
};

struct ReplicateCounts {
  long null_replicates = 100000;
  long alternative = 10000;
  long empirical_cmin = 1000000;  // 0 disables the empirical solver
};

struct CGridSpec {
  double lo = -3.0;
  double hi = 3.0;
  double step = 0.05;

  std::vector<double> values() const;
};

struct Sweeps {
  std::vector<double> rho_xy;
  std::vector<double> rho_xz;
  std::vector<double> m_max_ratio;  // "inf" in the config becomes 1e6
  std::vector<double> info_fraction;
  std::vector<double> c;            // cutoffs for the oc command
  std::optional<CGridSpec> c_grid;
  std::vector<double> hr;           // applied to both endpoints in power studies
  std::vector<double> orr_t;
  bool empirical_grid = false;
};

struct OutputSpec {
  std::string dir = "out";
  std::string format = "csv";  // csv | json
};

struct RunConfig {
  DesignParams design;
  std::vector<NamedScenario> scenarios;
  ReplicateCounts replicates;
  std::uint64_t seed = 1;
  int threads = 0;
  std::optional<AccrualSetup> accrual;
  Sweeps sweeps;
  OutputSpec output;
  std::vector<std::string> warnings;  // soft validation notes, printed not fatal
};

// Strict parse: unknown keys anywhere are rejected (fail-closed), required
// sections must be present, and all domain invariants are checked up front.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// The fully-resolved configuration (defaults materialized). Re-ingesting
// this json reproduces the run; its hash names the output files.
nlohmann::json resolved_config(const RunConfig& cfg);
std::string config_hash(const nlohmann::json& resolved);

}  // namespace twoin1
