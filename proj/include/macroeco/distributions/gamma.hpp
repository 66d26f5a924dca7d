#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "macroeco/distributions/dist_fit.hpp"
#include "macroeco/error.hpp"
#include "macroeco/statcore/optimize.hpp"
#include "macroeco/statcore/random.hpp"
#include "macroeco/statcore/special.hpp"

namespace macroeco::dist {

struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;
};

inline double gamma_log_pdf(double x, const GammaParams& p) {
  if (!(p.shape > 0.0) || !(p.scale > 0.0)) fail(Errc::DomainError, "gamma needs positive params");
  if (!(x > 0.0)) fail(Errc::DomainError, "gamma pdf needs x > 0");
  return (p.shape - 1.0) * std::log(x) - x / p.scale - p.shape * std::log(p.scale) -
         stats::log_gamma(p.shape);
}

inline double gamma_pdf(double x, const GammaParams& p) { return std::exp(gamma_log_pdf(x, p)); }

inline double gamma_cdf(double x, const GammaParams& p) {
  if (x <= 0.0) return 0.0;
  return stats::regularized_gamma_p(p.shape, x / p.scale);
}

inline std::vector<double> gamma_sample(stats::RandomSource& rng, const GammaParams& p,
                                        std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = rng.gamma(p.shape, p.scale);
  return out;
}

struct GammaFit {
  GammaParams params;
  double loglik = 0.0;
  std::size_t n = 0;

  DistFit record() const {
    return {"gamma", {{"shape", params.shape}, {"scale", params.scale}}, loglik, n};
  }
};

/// MLE with the scale profiled out (scale = mean / shape), leaving a 1-D
/// search over log(shape).
inline GammaFit gamma_fit(std::span<const double> sample) {
  if (sample.size() < 2) fail(Errc::TooFewSamples, "gamma_fit needs at least two values");
  double sum = 0.0;
  double sum_log = 0.0;
  for (double x : sample) {
    if (!(x > 0.0)) fail(Errc::NonPositiveSample, "gamma_fit needs positive values");
    sum += x;
    sum_log += std::log(x);
  }
  const auto n = static_cast<double>(sample.size());
  const double m = sum / n;
  const double mean_log = sum_log / n;
  if (!(std::log(m) - mean_log > 1e-14)) fail(Errc::FitDiverged, "gamma_fit: constant sample");
  auto neg_profile = [&](double log_k) {
    const double k = std::exp(log_k);
    return -((k - 1.0) * mean_log - k - k * std::log(m / k) - stats::log_gamma(k));
  };
  const auto best = stats::minimize_1d(neg_profile, std::log(1e-6), std::log(1e6), 1e-12);
  GammaFit fit;
  fit.params.shape = std::exp(best.x);
  fit.params.scale = m / fit.params.shape;
  fit.n = sample.size();
  for (double x : sample) fit.loglik += gamma_log_pdf(x, fit.params);
  return fit;
}

}  // namespace macroeco::dist
