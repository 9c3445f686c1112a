#pragma once

#include <cmath>
#include <limits>

namespace autostep {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline double normal_log_pdf(double x, double mu, double sigma) {
  static const double log_sqrt_two_pi = 0.91893853320467274178;
  const double t = (x - mu) / sigma;
  return -0.5 * t * t - std::log(sigma) - log_sqrt_two_pi;
}

inline double normal_cdf(double x, double mu = 0.0, double sigma = 1.0) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * 1.4142135623730951));
}

inline double laplace_cdf(double x) {
  return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
}

inline double cauchy_cdf(double x) {
  return 0.5 + std::atan(x) / 3.141592653589793;
}

// Survival function of the Kolmogorov distribution,
// Q(t) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
inline double kolmogorov_sf(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.18) return 1.0;  // series converges slowly; Q is 1 to >15 digits
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 128; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  const double q = 2.0 * sum;
  return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

}  // namespace autostep
