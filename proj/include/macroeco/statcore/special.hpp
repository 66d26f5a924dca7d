#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "macroeco/error.hpp"

namespace macroeco::stats {

namespace detail {

// Lanczos approximation, g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline double log_gamma_lanczos(double z) {
  // valid for z >= 0.5
  const double zm1 = z - 1.0;
  double sum = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    sum += kLanczosCoeffs[i] / (zm1 + static_cast<double>(i));
  }
  const double t = zm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (zm1 + 0.5) * std::log(t) - t + std::log(sum);
}

inline double log_gamma_stirling(double z) {
  // asymptotic series, accurate to double precision for z >= 15
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 -
                     inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

}  // namespace detail

/// Natural log of the gamma function for z > 0.
inline double log_gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    fail(Errc::DomainError, "log_gamma requires a finite z > 0");
  }
  if (z >= 15.0) return detail::log_gamma_stirling(z);
  if (z >= 0.5) return detail::log_gamma_lanczos(z);
  // Gamma(z) = Gamma(z + 1) / z
  return detail::log_gamma_lanczos(z + 1.0) - std::log(z);
}

/// e^x * E1(x), finite for every x > 0. Power series below 1, continued
/// fraction (modified Lentz) from 1 upwards.
inline double exp_integral_e1_scaled(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    fail(Errc::DomainError, "exp_integral_e1 requires a finite x > 0");
  }
  constexpr double eps = 1e-16;
  if (x < 1.0) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -x / k;
      const double contrib = term / k;
      sum += contrib;
      if (std::fabs(contrib) < eps * std::fabs(sum)) break;
    }
    const double e1 = -std::numbers::egamma - std::log(x) - sum;
    return std::exp(x) * e1;
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

/// Exponential integral E1(x) = integral from x to infinity of e^-t / t.
inline double exp_integral_e1(double x) { return exp_integral_e1_scaled(x) * std::exp(-x); }

/// log E1(x) without underflow for large x.
inline double log_exp_integral_e1(double x) { return std::log(exp_integral_e1_scaled(x)) - x; }

/// Regularized lower incomplete gamma P(a, x).
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) fail(Errc::DomainError, "regularized_gamma_p requires a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_prefix = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 10000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return std::min(1.0, sum * std::exp(log_prefix));
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::max(0.0, 1.0 - std::exp(log_prefix) * h);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace macroeco::stats
