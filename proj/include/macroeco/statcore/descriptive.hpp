#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "macroeco/error.hpp"

namespace macroeco::stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) fail(Errc::TooFewSamples, "mean of an empty sequence");
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

/// Population variance (divides by n).
inline double variance(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size());
}

/// Sample skewness g1 (biased moment estimator).
inline double skewness(std::span<const double> x) {
  const double m = mean(x);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const auto n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

/// Sample Pearson correlation coefficient.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(Errc::LengthMismatch, "pearson: sequences differ in length");
  if (x.size() < 2) fail(Errc::TooFewSamples, "pearson needs at least two points");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) fail(Errc::ZeroVariance, "pearson: constant sequence");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) fail(Errc::ZeroVariance, "pearson: constant sequence");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;

  double operator()(double x) const { return intercept + slope * x; }
};

/// Ordinary least squares. A constant response yields r_squared = 0.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(Errc::LengthMismatch, "linear_fit: sequences differ in length");
  if (x.size() < 2) fail(Errc::TooFewSamples, "linear_fit needs at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(Errc::ZeroVariance, "linear_fit: x has zero variance");
  LinearFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit(x[i]);
      sse += r * r;
    }
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return fit;
}

/// Quantile with linear interpolation between order statistics (R type 7).
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(Errc::TooFewSamples, "quantile of an empty sequence");
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, q);
}

inline double rmse(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size() || observed.empty()) {
    fail(Errc::LengthMismatch, "rmse: sequences differ in length or are empty");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
  }
  return std::sqrt(ss / static_cast<double>(observed.size()));
}

}  // namespace macroeco::stats
