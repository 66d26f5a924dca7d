#pragma once

// Test-only reference computations. Nothing here calls into the library's
// numerical routines, so these stay independent of the code they check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>

namespace oracle {

/// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels = 200000) {
  if (panels % 2 == 1) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    sum += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

/// E1(x) via the substitution t = x e^s: E1(x) = integral_0^inf exp(-x e^s) ds.
inline double exp_integral_e1(double x) {
  const double upper = std::log(60.0 / x) + 5.0;
  return simpson([x](double s) { return std::exp(-x * std::exp(s)); }, 0.0, upper, 2000000);
}

/// The turnover law evaluated term by term exactly as typeset, in plain
/// double arithmetic (valid for moderate arguments only).
inline double turnover_pdf_literal(double lambda, double A, double B, double t) {
  const double C = std::pow(2.0, A - 1.0) / std::sqrt(std::numbers::pi) *
                   std::tgamma(A + 0.5) / std::tgamma(A);
  const double e = std::exp(t / B);
  return C * (lambda + 1.0) / lambda * std::pow(e, A / 2.0) / (1.0 - std::exp(-t / B)) *
         std::pow(std::sinh(t / (2.0 * B)) / lambda, A + 1.0) *
         std::pow(4.0 * lambda * lambda / ((lambda + 1.0) * (lambda + 1.0) * e - 4.0 * lambda),
                  A + 0.5);
}

/// Hand-rolled two-pass Pearson coefficient.
template <typename V>
double pearson(const V& x, const V& y) {
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
