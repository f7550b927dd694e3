#include "twoin1/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace twoin1 {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& ctx,
                         const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("config: unknown key \"" + it.key() + "\" in " + ctx);
    }
  }
}

double get_number(const json& obj, const std::string& ctx, const std::string& key,
                  double fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError("config: missing required key \"" + key + "\" in " + ctx);
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("config: \"" + key + "\" in " + ctx + " must be a number");
  return v.get<double>();
}

long get_count(const json& obj, const std::string& ctx, const std::string& key,
               long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config: \"" + key + "\" in " + ctx + " must be a non-negative integer");
  }
  return static_cast<long>(v.get<long long>());
}

std::string get_string(const json& obj, const std::string& ctx, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("config: \"" + key + "\" in " + ctx + " must be a string");
  return v.get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const std::string& ctx,
                                    const std::string& key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError("config: \"" + key + "\" in " + ctx + " must be an array");
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError("config: \"" + key + "\" in " + ctx +
                                          " must contain numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

DesignParams parse_design(const json& j) {
  reject_unknown_keys(j, "design",
                      {"alpha", "power_target", "m1", "m2", "m_max", "rho_xy", "rho_xz",
                       "c", "m_phase2"});
  DesignParams p;
  p.alpha = get_number(j, "design", "alpha", p.alpha);
  p.power_target = get_number(j, "design", "power_target", p.power_target);
  p.m1 = get_number(j, "design", "m1", p.m1, true);
  p.m2 = get_number(j, "design", "m2", p.m2, true);
  p.m_max = get_number(j, "design", "m_max", p.m_max, true);
  p.rho_xy = get_number(j, "design", "rho_xy", p.rho_xy);
  p.rho_xz = get_number(j, "design", "rho_xz", p.rho_xz);
  p.c = get_number(j, "design", "c", p.c);
  p.m_phase2 = get_number(j, "design", "m_phase2", p.m_phase2);
  return p;
}

NamedScenario parse_scenario(const json& j, int index) {
  std::string ctx = "scenarios[" + std::to_string(index) + "]";
  reject_unknown_keys(j, ctx,
                      {"name", "hr_os", "hr_pfs", "orr_c", "orr_t", "n_per_arm_interim",
                       "replicates"});
  NamedScenario s;
  s.name = get_string(j, ctx, "name", "scenario" + std::to_string(index));
  s.scenario.hr_os = get_number(j, ctx, "hr_os", 1.0);
  s.scenario.hr_pfs = get_number(j, ctx, "hr_pfs", 1.0);
  s.scenario.orr_c = get_number(j, ctx, "orr_c", 0.1);
  s.scenario.orr_t = get_number(j, ctx, "orr_t", 0.1);
  s.scenario.n_per_arm_interim =
      static_cast<int>(get_count(j, ctx, "n_per_arm_interim", 60));
  if (j.contains("replicates")) s.replicates = get_count(j, ctx, "replicates", 0);
  return s;
}

AccrualSetup parse_accrual(const json& j) {
  reject_unknown_keys(j, "accrual",
                      {"rate", "control_median_os", "control_median_pfs",
                       "patients_phase2_cap", "patients_phase3_cap"});
  AccrualSetup a;
  a.model.rate = get_number(j, "accrual", "rate", a.model.rate);
  a.model.control_median_os =
      get_number(j, "accrual", "control_median_os", a.model.control_median_os);
  a.model.control_median_pfs =
      get_number(j, "accrual", "control_median_pfs", a.model.control_median_pfs);
  a.patients_phase2_cap =
      static_cast<int>(get_count(j, "accrual", "patients_phase2_cap", a.patients_phase2_cap));
  a.patients_phase3_cap =
      static_cast<int>(get_count(j, "accrual", "patients_phase3_cap", a.patients_phase3_cap));
  return a;
}

Sweeps parse_sweeps(const json& j) {
  reject_unknown_keys(j, "sweeps",
                      {"rho_xy", "rho_xz", "m_max_ratio", "info_fraction", "c", "c_grid",
                       "hr", "orr_t", "empirical_grid"});
  Sweeps s;
  s.rho_xy = get_number_list(j, "sweeps", "rho_xy");
  s.rho_xz = get_number_list(j, "sweeps", "rho_xz");
  s.info_fraction = get_number_list(j, "sweeps", "info_fraction");
  s.c = get_number_list(j, "sweeps", "c");
  s.hr = get_number_list(j, "sweeps", "hr");
  s.orr_t = get_number_list(j, "sweeps", "orr_t");
  if (j.contains("m_max_ratio")) {
    const json& v = j.at("m_max_ratio");
    if (!v.is_array()) throw ConfigError("config: \"m_max_ratio\" must be an array");
    for (const auto& e : v) {
      if (e.is_string() && e.get<std::string>() == "inf") {
        s.m_max_ratio.push_back(1e6);  // unbounded-cap surrogate
      } else if (e.is_number() && e.get<double>() >= 1.0) {
        s.m_max_ratio.push_back(e.get<double>());
      } else {
        throw ConfigError("config: \"m_max_ratio\" entries must be numbers >= 1 or \"inf\"");
      }
    }
  }
  if (j.contains("c_grid")) {
    const json& g = j.at("c_grid");
    reject_unknown_keys(g, "sweeps.c_grid", {"lo", "hi", "step"});
    CGridSpec spec;
    spec.lo = get_number(g, "sweeps.c_grid", "lo", spec.lo);
    spec.hi = get_number(g, "sweeps.c_grid", "hi", spec.hi);
    spec.step = get_number(g, "sweeps.c_grid", "step", spec.step);
    if (!(spec.lo < spec.hi) || !(spec.step > 0.0)) {
      throw ConfigError("config: sweeps.c_grid requires lo < hi and step > 0");
    }
    s.c_grid = spec;
  }
  if (j.contains("empirical_grid")) {
    if (!j.at("empirical_grid").is_boolean()) {
      throw ConfigError("config: \"empirical_grid\" must be a boolean");
    }
    s.empirical_grid = j.at("empirical_grid").get<bool>();
  }
  return s;
}

}  // namespace

std::vector<double> CGridSpec::values() const {
  std::vector<double> out;
  int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(lo + i * step);
  return out;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown_keys(j, "top level",
                      {"design", "scenarios", "replicates", "seed", "threads", "accrual",
                       "sweeps", "output"});
  if (!j.contains("design")) throw ConfigError("config: missing required section \"design\"");

  RunConfig cfg;
  cfg.design = parse_design(j.at("design"));
  try {
    cfg.warnings = validate(cfg.design);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (j.contains("scenarios")) {
    const json& arr = j.at("scenarios");
    if (!arr.is_array()) throw ConfigError("config: \"scenarios\" must be an array");
    int idx = 0;
    for (const auto& e : arr) {
      NamedScenario s = parse_scenario(e, idx++);
      try {
        (void)validate(s.scenario);
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("config: ") + ex.what());
      }
      cfg.scenarios.push_back(std::move(s));
    }
  }

  if (j.contains("replicates")) {
    const json& r = j.at("replicates");
    reject_unknown_keys(r, "replicates", {"null", "alternative", "empirical_cmin"});
    ReplicateCounts defaults;
    cfg.replicates.null_replicates =
        get_count(r, "replicates", "null", defaults.null_replicates);
    cfg.replicates.alternative =
        get_count(r, "replicates", "alternative", defaults.alternative);
    cfg.replicates.empirical_cmin =
        get_count(r, "replicates", "empirical_cmin", defaults.empirical_cmin);
  }

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    bool ok = s.is_number_unsigned() ||
              (s.is_number_integer() && s.get<long long>() >= 0);
    if (!ok) throw ConfigError("config: \"seed\" must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    cfg.threads = static_cast<int>(get_count(j, "top level", "threads", 0));
  }
  if (j.contains("accrual")) {
    AccrualSetup a = parse_accrual(j.at("accrual"));
    try {
      (void)validate(a);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.accrual = a;
  }
  if (j.contains("sweeps")) cfg.sweeps = parse_sweeps(j.at("sweeps"));
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown_keys(o, "output", {"dir", "format"});
    cfg.output.dir = get_string(o, "output", "dir", cfg.output.dir);
    cfg.output.format = get_string(o, "output", "format", cfg.output.format);
    if (cfg.output.format != "csv" && cfg.output.format != "json") {
      throw ConfigError("config: output.format must be \"csv\" or \"json\"");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

nlohmann::json resolved_config(const RunConfig& cfg) {
  json j;
  j["design"] = {{"alpha", cfg.design.alpha},
                 {"power_target", cfg.design.power_target},
                 {"m1", cfg.design.m1},
                 {"m2", cfg.design.m2},
                 {"m_max", cfg.design.m_max},
                 {"rho_xy", cfg.design.rho_xy},
                 {"rho_xz", cfg.design.rho_xz},
                 {"c", cfg.design.c},
                 {"m_phase2", cfg.design.m_phase2}};
  j["scenarios"] = json::array();
  for (const auto& s : cfg.scenarios) {
    json e = {{"name", s.name},
              {"hr_os", s.scenario.hr_os},
              {"hr_pfs", s.scenario.hr_pfs},
              {"orr_c", s.scenario.orr_c},
              {"orr_t", s.scenario.orr_t},
              {"n_per_arm_interim", s.scenario.n_per_arm_interim}};
    if (s.replicates) e["replicates"] = *s.replicates;
    j["scenarios"].push_back(e);
  }
  j["replicates"] = {{"null", cfg.replicates.null_replicates},
                     {"alternative", cfg.replicates.alternative},
                     {"empirical_cmin", cfg.replicates.empirical_cmin}};
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  if (cfg.accrual) {
    j["accrual"] = {{"rate", cfg.accrual->model.rate},
                    {"control_median_os", cfg.accrual->model.control_median_os},
                    {"control_median_pfs", cfg.accrual->model.control_median_pfs},
                    {"patients_phase2_cap", cfg.accrual->patients_phase2_cap},
                    {"patients_phase3_cap", cfg.accrual->patients_phase3_cap}};
  }
  json sw = json::object();
  if (!cfg.sweeps.rho_xy.empty()) sw["rho_xy"] = cfg.sweeps.rho_xy;
  if (!cfg.sweeps.rho_xz.empty()) sw["rho_xz"] = cfg.sweeps.rho_xz;
  if (!cfg.sweeps.m_max_ratio.empty()) sw["m_max_ratio"] = cfg.sweeps.m_max_ratio;
  if (!cfg.sweeps.info_fraction.empty()) sw["info_fraction"] = cfg.sweeps.info_fraction;
  if (!cfg.sweeps.c.empty()) sw["c"] = cfg.sweeps.c;
  if (cfg.sweeps.c_grid) {
    sw["c_grid"] = {{"lo", cfg.sweeps.c_grid->lo},
                    {"hi", cfg.sweeps.c_grid->hi},
                    {"step", cfg.sweeps.c_grid->step}};
  }
  if (!cfg.sweeps.hr.empty()) sw["hr"] = cfg.sweeps.hr;
  if (!cfg.sweeps.orr_t.empty()) sw["orr_t"] = cfg.sweeps.orr_t;
  if (cfg.sweeps.empirical_grid) sw["empirical_grid"] = true;
  if (!sw.empty()) j["sweeps"] = sw;
  j["output"] = {{"dir", cfg.output.dir}, {"format", cfg.output.format}};
  return j;
}

std::string config_hash(const nlohmann::json& resolved) {
  // Hash the computational identity only: where the files land and how many
  // workers ran cannot change the numbers, so they do not change the name.
  json core = resolved;
  core.erase("output");
  core.erase("threads");
  // FNV-1a over the canonical dump (nlohmann objects iterate in key order).
  std::string dump = core.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace twoin1
