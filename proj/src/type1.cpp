#include "twoin1/type1.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twoin1/normal.hpp"
#include "twoin1/root_find.hpp"
#include "twoin1/rng.hpp"
#include "twoin1/sim.hpp"

namespace twoin1 {

namespace {

struct Kernel {
  double za;          // Z_{1-alpha}
  double t;           // information fraction
  double w;           // promising threshold
  double cap;         // m_max / m_total
  double rho_xy, rho_xz;
  double sxy, sxz;    // sqrt(1 - rho^2)
  double sqrt_t, sqrt_1mt;

  explicit Kernel(const DesignParams& p)
      : za(std_normal_quantile(1.0 - p.alpha)),
        t(info_fraction(p)),
        w(promising_threshold(p)),
        cap(p.m_max / p.m_total()),
        rho_xy(p.rho_xy),
        rho_xz(p.rho_xz),
        sxy(std::sqrt(1.0 - p.rho_xy * p.rho_xy)),
        sxz(std::sqrt(1.0 - p.rho_xz * p.rho_xz)),
        sqrt_t(std::sqrt(t)),
        sqrt_1mt(std::sqrt(1.0 - t)) {}

  // Pr(X > c | Z1 = z1) under the null.
  double g(double z1, double c) const {
    return std_normal_cdf((rho_xz * z1 - c) / sxz);
  }

  // Rejection probability of the pooled final test given z1 >= W (planned size).
  double f1(double z1) const {
    return std_normal_cdf((z1 * sqrt_t - za) / sqrt_1mt);
  }

  // Rejection probability given z1 < W, with the re-estimated size capped at
  // m_max. z1 <= 0 follows the reestimate convention and commits the cap.
  double f2(const DesignParams& p, double z1) const {
    double nn;   // m* / m_total
    double den;  // sqrt(m2* / m_total)
    if (z1 <= 0.0) {
      nn = cap;
      den = std::sqrt(cap - t);
    } else {
      double u = ssr_events_uncapped(z1, p) / p.m_total();
      nn = std::min(t + u, cap);
      den = std::sqrt(std::min(u, cap - t));
    }
    return std_normal_cdf((z1 * sqrt_t - za * std::sqrt(nn)) / den);
  }
};

void check_params(const DesignParams& p) { (void)validate(p); }

}  // namespace

double phase2_term(double c, const DesignParams& p, const QuadratureRule& rule) {
  check_params(p);
  Kernel k(p);
  return integrate_unit(
      [&](double s) {
        double x = c - (1.0 - s) / s;
        return std_normal_cdf((k.rho_xy * x - k.za) / k.sxy) * std_normal_pdf(x) / (s * s);
      },
      rule);
}

double phase2_term(double c, const DesignParams& p) {
  return phase2_term(c, p, default_rule());
}

double phase3_term(double c, const DesignParams& p, const QuadratureRule& rule) {
  check_params(p);
  Kernel k(p);
  // upper segment: z1 = W + s/(1-s)
  double upper = integrate_unit(
      [&](double s) {
        double z1 = k.w + s / (1.0 - s);
        double om = 1.0 - s;
        return k.f1(z1) * k.g(z1, c) * std_normal_pdf(z1) / (om * om);
      },
      rule);
  // lower segment: z1 = W - (1-s)/s
  double lower = integrate_unit(
      [&](double s) {
        double z1 = k.w - (1.0 - s) / s;
        return k.f2(p, z1) * k.g(z1, c) * std_normal_pdf(z1) / (s * s);
      },
      rule);
  return upper + lower;
}

double phase3_term(double c, const DesignParams& p) {
  return phase3_term(c, p, default_rule());
}

Type1Breakdown overall_type1(double c, const DesignParams& p, const QuadratureRule& rule) {
  Type1Breakdown b{};
  b.phase2_term = phase2_term(c, p, rule);
  b.phase3_term = phase3_term(c, p, rule);
  b.total = b.phase2_term + b.phase3_term;
  return b;
}

Type1Breakdown overall_type1(double c, const DesignParams& p) {
  return overall_type1(c, p, default_rule());
}

CminResult solve_cmin(const DesignParams& p, const QuadratureRule& rule,
                      const CminScan& scan) {
  check_params(p);
  if (!(scan.lo < scan.hi) || !(scan.step > 0.0)) {
    throw std::invalid_argument("solve_cmin: invalid scan window");
  }
  auto excess = [&](double c) { return overall_type1(c, p, rule).total - p.alpha; };

  CminResult res;
  res.method = CminMethod::analytic;
  int n = static_cast<int>(std::floor((scan.hi - scan.lo) / scan.step)) + 1;
  double prev_c = scan.lo;
  double prev_v = excess(prev_c);
  for (int i = 1; i < n; ++i) {
    double cc = scan.lo + i * scan.step;
    double v = excess(cc);
    if (prev_v >= 0.0 && v < 0.0) {
      double root = find_root(excess, Bracket{prev_c, cc, prev_v, v}, scan.tol);
      res.crossings.push_back(root);
    }
    prev_c = cc;
    prev_v = v;
  }
  if (!res.crossings.empty()) {
    res.c_min = res.crossings.back();
    res.residual = std::abs(excess(*res.c_min));
  }
  return res;
}

CminResult solve_cmin(const DesignParams& p) {
  return solve_cmin(p, default_rule(), CminScan{});
}

namespace {

// Per-replicate sufficient statistics for any cutoff: the interim X and the
// phase-2 / phase-3 rejection flags (neither depends on c).
struct NullDraw {
  double x;
  bool reject_phase2;
  bool reject_phase3;
};

std::vector<NullDraw> simulate_null(const DesignParams& p, long replicates,
                                    std::uint64_t seed) {
  EffectScenario null_scenario;  // all drifts zero
  double za = std_normal_quantile(1.0 - p.alpha);
  std::vector<NullDraw> draws(static_cast<std::size_t>(replicates));
  for (long i = 0; i < replicates; ++i) {
    ReplicateRng rng(seed, static_cast<std::uint64_t>(i));
    StatisticDraw d = draw_replicate(null_scenario, p, rng);
    SsrResult ssr = reestimate(d.z1, p);
    double m_star = ssr.m_star;
    double m2s = m_star - p.m1;
    double z2 = d.z1 * std::sqrt(p.m1 / m_star) + d.z2_incr_unit * std::sqrt(m2s / m_star);
    draws[static_cast<std::size_t>(i)] = {d.x, d.y > za, z2 > za};
  }
  return draws;
}

// One set of null draws evaluable at any cutoff: sort by x, then the
// rejection probability at c is (phase-2 rejections with x <= c) plus
// (phase-3 rejections with x > c), read off prefix/suffix counts.
class EmpiricalNullCurve {
 public:
  EmpiricalNullCurve(const DesignParams& p, long replicates, std::uint64_t seed)
      : draws_(simulate_null(p, replicates, seed)) {
    std::sort(draws_.begin(), draws_.end(),
              [](const NullDraw& a, const NullDraw& b) { return a.x < b.x; });
    std::size_t n = draws_.size();
    prefix2_.assign(n + 1, 0);
    suffix3_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      prefix2_[i + 1] = prefix2_[i] + (draws_[i].reject_phase2 ? 1 : 0);
    }
    for (std::size_t i = n; i-- > 0;) {
      suffix3_[i] = suffix3_[i + 1] + (draws_[i].reject_phase3 ? 1 : 0);
    }
  }

  double n() const { return static_cast<double>(draws_.size()); }

  double at(double c) const {
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(draws_.begin(), draws_.end(), c,
                         [](double value, const NullDraw& d) { return value < d.x; }) -
        draws_.begin());
    return static_cast<double>(prefix2_[idx] + suffix3_[idx]) / n();
  }

 private:
  std::vector<NullDraw> draws_;
  std::vector<long> prefix2_;
  std::vector<long> suffix3_;
};

}  // namespace

CminResult empirical_cmin(const DesignParams& p, long replicates, std::uint64_t seed,
                          const CminScan& scan) {
  check_params(p);
  if (replicates < 100000) {
    throw std::invalid_argument("empirical_cmin: needs at least 1e5 replicates");
  }
  if (!(scan.step > 0.0 && scan.step <= 0.005)) {
    throw std::invalid_argument("empirical_cmin: grid step must lie in (0, 0.005]");
  }

  EmpiricalNullCurve curve(p, replicates, seed);

  CminResult res;
  res.method = CminMethod::empirical;
  int cells = static_cast<int>(std::floor((scan.hi - scan.lo) / scan.step)) + 1;
  double prev_c = scan.lo;
  double prev_v = curve.at(prev_c) - p.alpha;
  for (int i = 1; i < cells; ++i) {
    double cc = scan.lo + i * scan.step;
    double v = curve.at(cc) - p.alpha;
    if (prev_v >= 0.0 && v < 0.0) {
      // linear interpolation between adjacent grid points
      double root = prev_c + scan.step * prev_v / (prev_v - v);
      res.crossings.push_back(root);
    }
    prev_c = cc;
    prev_v = v;
  }
  if (!res.crossings.empty()) {
    res.c_min = res.crossings.back();
    res.residual = std::abs(curve.at(*res.c_min) - p.alpha);
  }
  return res;
}

std::vector<std::pair<double, double>> empirical_type1_curve(
    const DesignParams& p, const std::vector<double>& c_grid, long replicates,
    std::uint64_t seed) {
  check_params(p);
  if (replicates < 1) throw std::invalid_argument("empirical_type1_curve: no replicates");
  EmpiricalNullCurve curve(p, replicates, seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(c_grid.size());
  for (double c : c_grid) {
    double ph = curve.at(c);
    out.emplace_back(ph, std::sqrt(ph * (1.0 - ph) / curve.n()));
  }
  return out;
}

}  // namespace twoin1
