#pragma once

namespace twoin1 {

// Standard normal density phi(x).
double std_normal_pdf(double x) noexcept;

// Standard normal distribution function Phi(x). Absolute error below 1e-15
// (delegates to erfc). Throws std::domain_error on non-finite input.
double std_normal_cdf(double x);

// Inverse of Phi. Acklam's rational approximation refined by one Halley
// step, so |Phi(quantile(p)) - p| stays below 1e-14. Requires 0 < p < 1,
// otherwise throws std::domain_error.
double std_normal_quantile(double p);

}  // namespace twoin1
