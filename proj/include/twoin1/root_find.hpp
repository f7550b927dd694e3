#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace twoin1 {

// A sign-changing interval: lo < hi and f_lo, f_hi of opposite signs.
struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

// Evaluates g at both ends and validates the sign change.
// Throws std::invalid_argument if the endpoints do not bracket a root.
template <class F>
Bracket make_bracket(F&& g, double lo, double hi) {
  Bracket br{lo, hi, g(lo), g(hi)};
  if (!(br.lo < br.hi)) {
    throw std::invalid_argument("make_bracket: requires lo < hi");
  }
  if (br.f_lo == 0.0 || br.f_hi == 0.0) return br;  // endpoint root, still valid
  if (std::signbit(br.f_lo) == std::signbit(br.f_hi)) {
    std::ostringstream os;
    os << "make_bracket: no sign change on [" << lo << ", " << hi << "] (g = " << br.f_lo
       << ", " << br.f_hi << ")";
    throw std::invalid_argument(os.str());
  }
  return br;
}

// False position with the Illinois modification and bisection fallback.
// Stops when |g(x)| <= tol or the bracket width drops below tol.
template <class F>
double find_root(F&& g, Bracket br, double tol = 1e-8) {
  if (!(br.lo < br.hi)) {
    throw std::invalid_argument("find_root: bracket requires lo < hi");
  }
  if (br.f_lo == 0.0) return br.lo;
  if (br.f_hi == 0.0) return br.hi;
  if (std::signbit(br.f_lo) == std::signbit(br.f_hi)) {
    throw std::invalid_argument("find_root: bracket endpoints have the same sign");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("find_root: tol must be positive");
  }

  double lo = br.lo, hi = br.hi, f_lo = br.f_lo, f_hi = br.f_hi;
  int last_side = 0;
  for (int iter = 0; iter < 200; ++iter) {
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    double fx = g(x);
    if (std::abs(fx) <= tol || (hi - lo) <= tol) return x;
    if (std::signbit(fx) == std::signbit(f_lo)) {
      lo = x;
      f_lo = fx;
      if (last_side == -1) f_hi *= 0.5;
      last_side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (last_side == +1) f_lo *= 0.5;
      last_side = +1;
    }
  }
  throw std::runtime_error("find_root: failed to converge in 200 iterations");
}

}  // namespace twoin1
