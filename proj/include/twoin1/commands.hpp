#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "twoin1/config.hpp"

namespace twoin1 {

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  nlohmann::json meta;  // embeds the resolved config; no timestamps
  std::vector<Table> tables;
};

// Interim-cutoff solver: analytic (and optionally empirical) minimal safe
// cutoff for the configured design, plus the grid over sweep combinations.
Report cmd_cmin(const RunConfig& cfg);

// Analytic type-I error decomposition over a cutoff grid, one curve per
// (rho pair, cap ratio, information fraction) combination.
Report cmd_type1_curve(const RunConfig& cfg);

// Simulated operating characteristics: one row per scenario x cutoff x
// design, all designs on shared draws.
Report cmd_oc(const RunConfig& cfg);

// Power / expansion-probability sweeps over hazard-ratio and ORR grids.
Report cmd_power_study(const RunConfig& cfg);

// Writes the meta json plus one file per table into spec.dir; returns the
// paths written. File names carry the resolved-config hash.
std::vector<std::string> emit_report(const Report& report, const OutputSpec& spec);

}  // namespace twoin1
