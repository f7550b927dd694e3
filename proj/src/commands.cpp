#include "twoin1/commands.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "twoin1/csv.hpp"
#include "twoin1/sim.hpp"
#include "twoin1/type1.hpp"

namespace twoin1 {

namespace {

using nlohmann::json;

std::vector<double> or_default(const std::vector<double>& list, double fallback) {
  return list.empty() ? std::vector<double>{fallback} : list;
}

// One design variant per grid cell: rho pair, cap ratio and information
// fraction replace the base values, total planned events stay fixed.
DesignParams grid_design(const DesignParams& base, double rho_xy, double rho_xz,
                         double ratio, double t) {
  DesignParams p = base;
  p.rho_xy = rho_xy;
  p.rho_xz = rho_xz;
  double m = base.m_total();
  p.m1 = t * m;
  p.m2 = m - p.m1;
  p.m_max = ratio * m;
  try {
    (void)validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: sweep cell invalid: ") + e.what());
  }
  return p;
}

std::string cmin_cell(const CminResult& r) {
  return r.unbounded_below() ? "unbounded-below" : format_number(*r.c_min);
}

json cmin_json(const CminResult& r) {
  json j;
  j["method"] = r.method == CminMethod::analytic ? "analytic" : "empirical";
  if (r.unbounded_below()) {
    j["c_min"] = "unbounded-below";
  } else {
    j["c_min"] = *r.c_min;
    j["residual"] = r.residual;
  }
  j["crossings"] = r.crossings;
  return j;
}

long scenario_replicates(const RunConfig& cfg, const NamedScenario& s) {
  if (s.replicates) return *s.replicates;
  return s.scenario.is_null() ? cfg.replicates.null_replicates : cfg.replicates.alternative;
}

void append_oc_row(Table& table, const std::string& scenario, const DesignParams& p,
                   const std::string& design, const OCSummary& s, bool with_durations) {
  auto num = [](double v) { return format_number(v); };
  auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("NA");
  };
  table.rows.push_back({scenario, num(p.c), num(p.rho_xz), num(p.m_max), design,
                        std::to_string(s.n), num(s.p_expand), num(s.p_expand_se),
                        num(s.power_overall), num(s.power_overall_se),
                        num(s.power_phase2_cond), num(s.power_phase2_cond_se),
                        num(s.power_phase3_cond), num(s.power_phase3_cond_se),
                        num(s.expected_events_overall), num(s.expected_events_phase2),
                        num(s.expected_events_phase3), opt(s.expected_duration_overall),
                        opt(s.expected_duration_phase2), opt(s.expected_duration_phase3),
                        with_durations ? "assumption-dependent" : ""});
}

}  // namespace

Report cmd_cmin(const RunConfig& cfg) {
  Report report;
  report.command = "cmin";
  report.meta["command"] = "cmin";
  report.meta["config"] = resolved_config(cfg);

  CminResult analytic = solve_cmin(cfg.design);
  report.meta["analytic"] = cmin_json(analytic);

  Table headline{"solution",
                 {"method", "c_min", "residual", "n_crossings"},
                 {{"analytic", cmin_cell(analytic),
                   analytic.unbounded_below() ? "NA" : format_number(analytic.residual),
                   std::to_string(analytic.crossings.size())}}};

  long emp_reps = cfg.replicates.empirical_cmin;
  if (emp_reps > 0) {
    if (emp_reps < 100000) {
      throw ConfigError("config: replicates.empirical_cmin must be at least 1e5 (or 0 to skip)");
    }
    CminResult empirical = empirical_cmin(cfg.design, emp_reps, cfg.seed);
    report.meta["empirical"] = cmin_json(empirical);
    report.meta["empirical"]["replicates"] = emp_reps;
    headline.rows.push_back({"empirical", cmin_cell(empirical),
                             empirical.unbounded_below() ? "NA"
                                                         : format_number(empirical.residual),
                             std::to_string(empirical.crossings.size())});
  }
  report.tables.push_back(std::move(headline));

  const Sweeps& sw = cfg.sweeps;
  bool has_grid = !sw.rho_xy.empty() || !sw.rho_xz.empty() || !sw.m_max_ratio.empty() ||
                  !sw.info_fraction.empty();
  if (has_grid) {
    double base_ratio = cfg.design.m_max / cfg.design.m_total();
    double base_t = info_fraction(cfg.design);
    Table grid{"grid",
               {"rho_xy", "rho_xz", "m_max_ratio", "info_fraction", "method", "c_min",
                "residual", "n_crossings"},
               {}};
    for (double rxy : or_default(sw.rho_xy, cfg.design.rho_xy)) {
      for (double rxz : or_default(sw.rho_xz, cfg.design.rho_xz)) {
        for (double ratio : or_default(sw.m_max_ratio, base_ratio)) {
          for (double t : or_default(sw.info_fraction, base_t)) {
            DesignParams cell = grid_design(cfg.design, rxy, rxz, ratio, t);
            CminResult r = solve_cmin(cell);
            grid.rows.push_back({format_number(rxy), format_number(rxz),
                                 format_number(ratio), format_number(t), "analytic",
                                 cmin_cell(r),
                                 r.unbounded_below() ? "NA" : format_number(r.residual),
                                 std::to_string(r.crossings.size())});
            if (sw.empirical_grid) {
              if (emp_reps < 100000) {
                throw ConfigError(
                    "config: empirical_grid needs replicates.empirical_cmin >= 1e5");
              }
              CminResult e = empirical_cmin(cell, emp_reps, cfg.seed);
              grid.rows.push_back({format_number(rxy), format_number(rxz),
                                   format_number(ratio), format_number(t), "empirical",
                                   cmin_cell(e),
                                   e.unbounded_below() ? "NA" : format_number(e.residual),
                                   std::to_string(e.crossings.size())});
            }
          }
        }
      }
    }
    report.tables.push_back(std::move(grid));
  }
  return report;
}

Report cmd_type1_curve(const RunConfig& cfg) {
  Report report;
  report.command = "type1-curve";
  report.meta["command"] = "type1-curve";
  report.meta["config"] = resolved_config(cfg);

  CGridSpec grid_spec = cfg.sweeps.c_grid.value_or(CGridSpec{});
  std::vector<double> c_grid = grid_spec.values();

  double base_ratio = cfg.design.m_max / cfg.design.m_total();
  double base_t = info_fraction(cfg.design);
  Table table{"curve",
              {"rho_xy", "rho_xz", "m_max_ratio", "info_fraction", "c", "phase2_term",
               "phase3_term", "total", "method"},
              {}};
  for (double rxy : or_default(cfg.sweeps.rho_xy, cfg.design.rho_xy)) {
    for (double rxz : or_default(cfg.sweeps.rho_xz, cfg.design.rho_xz)) {
      for (double ratio : or_default(cfg.sweeps.m_max_ratio, base_ratio)) {
        for (double t : or_default(cfg.sweeps.info_fraction, base_t)) {
          DesignParams cell = grid_design(cfg.design, rxy, rxz, ratio, t);
          for (double c : c_grid) {
            Type1Breakdown b = overall_type1(c, cell);
            table.rows.push_back({format_number(rxy), format_number(rxz),
                                  format_number(ratio), format_number(t), format_number(c),
                                  format_number(b.phase2_term), format_number(b.phase3_term),
                                  format_number(b.total), "analytic"});
          }
        }
      }
    }
  }
  report.tables.push_back(std::move(table));
  return report;
}

Report cmd_oc(const RunConfig& cfg) {
  if (cfg.scenarios.empty()) {
    throw ConfigError("config: \"oc\" needs at least one scenario");
  }
  Report report;
  report.command = "oc";
  report.meta["command"] = "oc";
  report.meta["config"] = resolved_config(cfg);

  // sweepable design knobs: cutoff, rho_xz, cap ratio (for the S1/S2-style runs)
  std::vector<double> cutoffs = or_default(cfg.sweeps.c, cfg.design.c);
  std::vector<double> rho_xzs = or_default(cfg.sweeps.rho_xz, cfg.design.rho_xz);
  std::vector<double> ratios =
      or_default(cfg.sweeps.m_max_ratio, cfg.design.m_max / cfg.design.m_total());
  Table table{"oc",
              {"scenario", "cutoff", "rho_xz", "m_max", "design", "n", "p_expand",
               "p_expand_se", "power_overall", "power_overall_se", "power_phase2_cond",
               "power_phase2_cond_se", "power_phase3_cond", "power_phase3_cond_se",
               "events_overall", "events_phase2", "events_phase3", "duration_overall",
               "duration_phase2", "duration_phase3", "duration_basis"},
              {}};
  for (const auto& named : cfg.scenarios) {
    for (double cutoff : cutoffs) {
      for (double rxz : rho_xzs) {
        for (double ratio : ratios) {
          DesignParams p = cfg.design;
          p.c = cutoff;
          p.rho_xz = rxz;
          p.m_max = ratio * p.m_total();
          try {
            (void)validate(p);
          } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: sweep cell invalid: ") + e.what());
          }
          SimOptions options;
          options.replicates = scenario_replicates(cfg, named);
          options.seed = cfg.seed;
          options.threads = cfg.threads;
          options.accrual = cfg.accrual;
          DesignSet set = run_designs(named.scenario, p, options);
          bool dur = cfg.accrual.has_value();
          append_oc_row(table, named.name, p, design_label_name(DesignLabel::f2in1, p),
                        set.f2in1, dur);
          append_oc_row(table, named.name, p,
                        design_label_name(DesignLabel::s2in1_planned, p), set.s2in1_planned,
                        dur);
          append_oc_row(table, named.name, p, design_label_name(DesignLabel::s2in1_max, p),
                        set.s2in1_max, dur);
          append_oc_row(table, named.name, p, design_label_name(DesignLabel::f2in1_chw, p),
                        set.f2in1_chw, dur);
        }
      }
    }
  }
  report.tables.push_back(std::move(table));
  return report;
}

Report cmd_power_study(const RunConfig& cfg) {
  if (cfg.scenarios.empty()) {
    throw ConfigError("config: \"power-study\" needs a base scenario");
  }
  Report report;
  report.command = "power-study";
  report.meta["command"] = "power-study";
  report.meta["config"] = resolved_config(cfg);

  const EffectScenario& base = cfg.scenarios.front().scenario;
  std::vector<double> hr_list = or_default(cfg.sweeps.hr, base.hr_os);
  std::vector<double> orr_list = or_default(cfg.sweeps.orr_t, base.orr_t);

  Table table{"power",
              {"hr_os", "hr_pfs", "orr_c", "orr_t", "design", "n", "p_expand",
               "p_expand_se", "power_overall", "power_overall_se", "power_phase3_cond",
               "power_phase3_cond_se"},
              {}};
  auto add_row = [&](const EffectScenario& s, const std::string& design,
                     const OCSummary& oc) {
    table.rows.push_back({format_number(s.hr_os), format_number(s.hr_pfs),
                          format_number(s.orr_c), format_number(s.orr_t), design,
                          std::to_string(oc.n), format_number(oc.p_expand),
                          format_number(oc.p_expand_se), format_number(oc.power_overall),
                          format_number(oc.power_overall_se),
                          format_number(oc.power_phase3_cond),
                          format_number(oc.power_phase3_cond_se)});
  };
  for (double hr : hr_list) {
    for (double orr_t : orr_list) {
      EffectScenario s = base;
      s.hr_os = hr;
      s.hr_pfs = hr;
      s.orr_t = orr_t;
      try {
        (void)validate(s);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: sweep scenario invalid: ") + e.what());
      }
      SimOptions options;
      options.replicates = s.is_null() ? cfg.replicates.null_replicates
                                       : cfg.replicates.alternative;
      options.seed = cfg.seed;
      options.threads = cfg.threads;
      DesignSet set = run_designs(s, cfg.design, options);
      add_row(s, design_label_name(DesignLabel::f2in1, cfg.design), set.f2in1);
      add_row(s, design_label_name(DesignLabel::s2in1_planned, cfg.design), set.s2in1_planned);
      add_row(s, design_label_name(DesignLabel::s2in1_max, cfg.design), set.s2in1_max);
      add_row(s, design_label_name(DesignLabel::f2in1_chw, cfg.design), set.f2in1_chw);
    }
  }
  report.tables.push_back(std::move(table));
  return report;
}

std::vector<std::string> emit_report(const Report& report, const OutputSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(spec.dir);
  std::string hash = config_hash(report.meta.at("config"));
  std::vector<std::string> written;

  json meta = report.meta;
  meta["tables"] = json::array();
  std::vector<std::pair<std::string, std::string>> table_files;
  for (const auto& table : report.tables) {
    std::string ext = spec.format == "json" ? ".json" : ".csv";
    std::string file = report.command + "_" + table.name + "_" + hash + ext;
    meta["tables"].push_back({{"name", table.name}, {"file", file}});
    table_files.emplace_back(file, table.name);
  }

  std::string meta_path = (fs::path(spec.dir) / (report.command + "_" + hash + ".json")).string();
  {
    std::ofstream out(meta_path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_report: cannot write " + meta_path);
    out << meta.dump(2) << "\n";
  }
  written.push_back(meta_path);

  for (std::size_t i = 0; i < report.tables.size(); ++i) {
    const Table& table = report.tables[i];
    std::string path = (fs::path(spec.dir) / table_files[i].first).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_report: cannot write " + path);
    if (spec.format == "json") {
      json jt;
      jt["header"] = table.header;
      jt["rows"] = table.rows;
      out << jt.dump(2) << "\n";
    } else {
      out << csv_line(table.header);
      for (const auto& row : table.rows) out << csv_line(row);
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace twoin1
