#include "twoin1/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "twoin1/normal.hpp"

namespace twoin1 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Drifts {
  double mu_x, mu_y, mu_z1;
  Drifts(const EffectScenario& s, const DesignParams& p)
      : mu_x(orr_z_cutoff(s.orr_c, s.orr_t, s.n_per_arm_interim)),
        mu_y(logrank_drift(s.hr_pfs, p.m_phase2)),
        mu_z1(logrank_drift(s.hr_os, p.m1)) {}
};

}  // namespace

std::string design_label_name(DesignLabel label, const DesignParams& p) {
  switch (label) {
    case DesignLabel::f2in1:
      return "F2in1";
    case DesignLabel::s2in1_planned:
      return "S2in1-" + std::to_string(static_cast<long long>(std::llround(p.m_total())));
    case DesignLabel::s2in1_max:
      return "S2in1-" + std::to_string(static_cast<long long>(std::llround(p.m_max)));
    case DesignLabel::f2in1_chw:
      return "F2in1-CHW";
  }
  return "?";
}

StatisticDraw draw_replicate(const EffectScenario& scenario, const DesignParams& p,
                             ReplicateRng& rng) {
  Drifts d(scenario, p);
  double u0 = rng.next_normal();
  double u1 = rng.next_normal();
  double u2 = rng.next_normal();
  double u3 = rng.next_normal();
  StatisticDraw out;
  out.x = d.mu_x + u0;
  out.y = d.mu_y + p.rho_xy * u0 + std::sqrt(1.0 - p.rho_xy * p.rho_xy) * u1;
  out.z1 = d.mu_z1 + p.rho_xz * u0 + std::sqrt(1.0 - p.rho_xz * p.rho_xz) * u2;
  out.z2_incr_unit = u3;
  return out;
}

TrialOutcome run_f2in1(const StatisticDraw& draw, const EffectScenario& scenario,
                       const DesignParams& p) {
  TrialOutcome out{};
  out.design = DesignLabel::f2in1;
  out.expanded = draw.x > p.c;
  double za = std_normal_quantile(1.0 - p.alpha);
  if (!out.expanded) {
    out.m_final = static_cast<int>(std::llround(p.m_phase2));
    out.rejected = draw.y > za;
    return out;
  }
  SsrResult ssr = reestimate(draw.z1, p);
  double m_star = ssr.m_star;
  double m2s = m_star - p.m1;  // equals m2_star whenever m1 is integral
  double z2_incr = draw.z2_incr_unit + logrank_drift(scenario.hr_os, m2s);
  double z2 = draw.z1 * std::sqrt(p.m1 / m_star) + z2_incr * std::sqrt(m2s / m_star);
  out.m_final = ssr.m_star;
  out.rejected = z2 > za;
  return out;
}

TrialOutcome run_s2in1(const StatisticDraw& draw, const EffectScenario& scenario,
                       const DesignParams& p, double m_phase3) {
  if (!(m_phase3 > p.m1)) {
    throw std::domain_error("run_s2in1: m_phase3 must exceed m1");
  }
  TrialOutcome out{};
  out.design = m_phase3 == p.m_max ? DesignLabel::s2in1_max : DesignLabel::s2in1_planned;
  out.expanded = draw.x > p.c;
  double za = std_normal_quantile(1.0 - p.alpha);
  if (!out.expanded) {
    out.m_final = static_cast<int>(std::llround(p.m_phase2));
    out.rejected = draw.y > za;
    return out;
  }
  double m2f = m_phase3 - p.m1;
  double z2_incr = draw.z2_incr_unit + logrank_drift(scenario.hr_os, m2f);
  double z2 = draw.z1 * std::sqrt(p.m1 / m_phase3) + z2_incr * std::sqrt(m2f / m_phase3);
  out.m_final = static_cast<int>(std::llround(m_phase3));
  out.rejected = z2 > za;
  return out;
}

TrialOutcome run_chw(const StatisticDraw& draw, const EffectScenario& scenario,
                     const DesignParams& p) {
  TrialOutcome out{};
  out.design = DesignLabel::f2in1_chw;
  out.expanded = draw.x > p.c;
  double za = std_normal_quantile(1.0 - p.alpha);
  if (!out.expanded) {
    out.m_final = static_cast<int>(std::llround(p.m_phase2));
    out.rejected = draw.y > za;
    return out;
  }
  SsrResult ssr = reestimate(draw.z1, p);
  double z2_incr = draw.z2_incr_unit + logrank_drift(scenario.hr_os, ssr.m_star - p.m1);
  out.m_final = ssr.m_star;
  out.rejected = chw_statistic(draw.z1, z2_incr, p) > za;
  return out;
}

namespace {

// Integer tallies plus an m_final histogram for the expanded branch. All
// merges are integer additions, so the combined result is independent of
// worker count and merge order; durations enter only at summary time as a
// deterministic function of m_final.
struct Tally {
  long n = 0;
  long n_expand = 0;
  long n_reject_phase2 = 0;
  long n_reject_phase3 = 0;
  long long events_phase2 = 0;
  long long events_phase3 = 0;
  std::map<int, long> hist_phase3;
  int m_phase2 = -1;
  bool durations_complete = true;
  double duration_phase2 = kNaN;                // constant across phase-2 outcomes
  std::map<int, double> duration_by_events;     // phase-3 m_final -> months

  void add(const TrialOutcome& o) {
    ++n;
    if (o.expanded) {
      ++n_expand;
      n_reject_phase3 += o.rejected ? 1 : 0;
      events_phase3 += o.m_final;
      ++hist_phase3[o.m_final];
      if (o.duration_months) {
        duration_by_events.emplace(o.m_final, *o.duration_months);
      } else {
        durations_complete = false;
      }
    } else {
      n_reject_phase2 += o.rejected ? 1 : 0;
      events_phase2 += o.m_final;
      m_phase2 = o.m_final;
      if (o.duration_months) {
        duration_phase2 = *o.duration_months;
      } else {
        durations_complete = false;
      }
    }
  }

  void merge(const Tally& other) {
    n += other.n;
    n_expand += other.n_expand;
    n_reject_phase2 += other.n_reject_phase2;
    n_reject_phase3 += other.n_reject_phase3;
    events_phase2 += other.events_phase2;
    events_phase3 += other.events_phase3;
    for (const auto& [m, cnt] : other.hist_phase3) hist_phase3[m] += cnt;
    if (other.m_phase2 >= 0) m_phase2 = other.m_phase2;
    durations_complete = durations_complete && other.durations_complete;
    if (!std::isnan(other.duration_phase2)) duration_phase2 = other.duration_phase2;
    for (const auto& [m, d] : other.duration_by_events) duration_by_events.emplace(m, d);
  }

  OCSummary summarize() const {
    if (n == 0) throw std::domain_error("aggregate: empty outcome list");
    OCSummary s;
    s.n = n;
    s.n_expand = n_expand;
    long n_stay = n - n_expand;
    long n_reject = n_reject_phase2 + n_reject_phase3;
    auto prop = [](long k, long total) {
      return total > 0 ? static_cast<double>(k) / static_cast<double>(total) : kNaN;
    };
    auto prop_se = [&](double ph, long total) {
      return total > 0 && !std::isnan(ph)
                 ? std::sqrt(ph * (1.0 - ph) / static_cast<double>(total))
                 : kNaN;
    };
    s.p_expand = prop(n_expand, n);
    s.p_expand_se = prop_se(s.p_expand, n);
    s.power_overall = prop(n_reject, n);
    s.power_overall_se = prop_se(s.power_overall, n);
    s.power_phase2_cond = prop(n_reject_phase2, n_stay);
    s.power_phase2_cond_se = prop_se(s.power_phase2_cond, n_stay);
    s.power_phase3_cond = prop(n_reject_phase3, n_expand);
    s.power_phase3_cond_se = prop_se(s.power_phase3_cond, n_expand);
    s.expected_events_overall =
        static_cast<double>(events_phase2 + events_phase3) / static_cast<double>(n);
    s.expected_events_phase2 =
        n_stay > 0 ? static_cast<double>(events_phase2) / static_cast<double>(n_stay) : kNaN;
    s.expected_events_phase3 =
        n_expand > 0 ? static_cast<double>(events_phase3) / static_cast<double>(n_expand)
                     : kNaN;
    if (durations_complete && (n_stay == 0 || !std::isnan(duration_phase2))) {
      double sum3 = 0.0;
      for (const auto& [m, cnt] : hist_phase3) {
        sum3 += duration_by_events.at(m) * static_cast<double>(cnt);
      }
      double sum2 = n_stay > 0 ? duration_phase2 * static_cast<double>(n_stay) : 0.0;
      s.expected_duration_overall = (sum2 + sum3) / static_cast<double>(n);
      if (n_stay > 0) s.expected_duration_phase2 = duration_phase2;
      if (n_expand > 0) s.expected_duration_phase3 = sum3 / static_cast<double>(n_expand);
    }
    return s;
  }
};

// Deterministic duration lookup shared by the engine workers.
class DurationTable {
 public:
  DurationTable(const EffectScenario& scenario, const AccrualSetup& setup)
      : scenario_(scenario), setup_(setup) {}

  double phase2(int m_events) {
    return lookup(phase2_cache_, m_events, setup_.patients_phase2_cap,
                  SurvivalEndpoint::pfs);
  }
  double phase3(int m_events) {
    return lookup(phase3_cache_, m_events, setup_.patients_phase3_cap,
                  SurvivalEndpoint::os);
  }

 private:
  double lookup(std::map<int, double>& cache, int m, int cap, SurvivalEndpoint ep) {
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    double d = expected_duration(m, scenario_, setup_.model, cap, ep);
    cache.emplace(m, d);
    return d;
  }

  EffectScenario scenario_;
  AccrualSetup setup_;
  std::map<int, double> phase2_cache_;
  std::map<int, double> phase3_cache_;
};

}  // namespace

OCSummary aggregate(const std::vector<TrialOutcome>& outcomes) {
  if (outcomes.empty()) throw std::domain_error("aggregate: empty outcome list");
  Tally tally;
  for (const auto& o : outcomes) {
    if (o.design != outcomes.front().design) {
      throw std::invalid_argument("aggregate: mixed design labels");
    }
    tally.add(o);
  }
  return tally.summarize();
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TWOIN1_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

DesignSet run_designs(const EffectScenario& scenario, const DesignParams& p,
                      const SimOptions& options) {
  (void)validate(p);
  (void)validate(scenario);
  if (options.replicates < 1) {
    throw std::invalid_argument("run_designs: replicates must be positive");
  }
  if (options.accrual) (void)validate(*options.accrual);

  const long total = options.replicates;
  const long block_size = 8192;
  const long n_blocks = (total + block_size - 1) / block_size;
  const int n_threads =
      static_cast<int>(std::min<long>(resolve_threads(options.threads), n_blocks));

  std::vector<std::array<Tally, 4>> partials(static_cast<std::size_t>(n_blocks));
  std::atomic<long> next_block{0};

  auto worker = [&]() {
    for (;;) {
      long b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      auto& tallies = partials[static_cast<std::size_t>(b)];
      long begin = b * block_size;
      long end = std::min(total, begin + block_size);
      for (long rep = begin; rep < end; ++rep) {
        ReplicateRng rng(options.seed, static_cast<std::uint64_t>(rep));
        StatisticDraw draw = draw_replicate(scenario, p, rng);
        tallies[0].add(run_f2in1(draw, scenario, p));
        tallies[1].add(run_s2in1(draw, scenario, p, p.m_total()));
        tallies[2].add(run_s2in1(draw, scenario, p, p.m_max));
        tallies[3].add(run_chw(draw, scenario, p));
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads) - 1);
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::array<Tally, 4> merged;
  for (const auto& block : partials) {
    for (int d = 0; d < 4; ++d) merged[d].merge(block[d]);
  }

  if (options.accrual) {
    DurationTable table(scenario, *options.accrual);
    for (auto& tally : merged) {
      tally.durations_complete = true;
      if (tally.n - tally.n_expand > 0) tally.duration_phase2 = table.phase2(tally.m_phase2);
      tally.duration_by_events.clear();
      for (const auto& [m, cnt] : tally.hist_phase3) {
        tally.duration_by_events.emplace(m, table.phase3(m));
      }
    }
  } else {
    for (auto& tally : merged) tally.durations_complete = false;
  }

  DesignSet out;
  out.f2in1 = merged[0].summarize();
  out.s2in1_planned = merged[1].summarize();
  out.s2in1_max = merged[2].summarize();
  out.f2in1_chw = merged[3].summarize();
  return out;
}

}  // namespace twoin1
