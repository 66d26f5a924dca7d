#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "macroeco/distributions/dist_fit.hpp"
#include "macroeco/error.hpp"
#include "macroeco/statcore/random.hpp"
#include "macroeco/statcore/special.hpp"

namespace macroeco::dist {

struct LogNormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

inline double lognormal_log_pdf(double x, const LogNormalParams& p) {
  if (!(p.sigma > 0.0)) fail(Errc::DomainError, "log-normal needs sigma > 0");
  if (!(x > 0.0)) fail(Errc::DomainError, "log-normal pdf needs x > 0");
  const double z = (std::log(x) - p.mu) / p.sigma;
  return -0.5 * z * z - std::log(x * p.sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

inline double lognormal_pdf(double x, const LogNormalParams& p) {
  return std::exp(lognormal_log_pdf(x, p));
}

inline double lognormal_cdf(double x, const LogNormalParams& p) {
  if (x <= 0.0) return 0.0;
  return stats::normal_cdf((std::log(x) - p.mu) / p.sigma);
}

inline std::vector<double> lognormal_sample(stats::RandomSource& rng, const LogNormalParams& p,
                                            std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = std::exp(rng.normal(p.mu, p.sigma));
  return out;
}

struct LogNormalFit {
  LogNormalParams params;
  double loglik = 0.0;
  std::size_t n = 0;

  DistFit record() const {
    return {"lognormal", {{"mu", params.mu}, {"sigma", params.sigma}}, loglik, n};
  }
};

/// Closed-form MLE: mean and population standard deviation of the logs.
inline LogNormalFit lognormal_fit(std::span<const double> sample) {
  if (sample.size() < 2) fail(Errc::TooFewSamples, "lognormal_fit needs at least two values");
  double s1 = 0.0;
  for (double x : sample) {
    if (!(x > 0.0)) fail(Errc::NonPositiveSample, "lognormal_fit needs positive values");
    s1 += std::log(x);
  }
  const auto n = static_cast<double>(sample.size());
  const double mu = s1 / n;
  double ss = 0.0;
  for (double x : sample) ss += (std::log(x) - mu) * (std::log(x) - mu);
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0)) fail(Errc::SigmaZero, "lognormal_fit: all values identical");
  LogNormalFit fit{{mu, sigma}, 0.0, sample.size()};
  for (double x : sample) fit.loglik += lognormal_log_pdf(x, fit.params);
  return fit;
}

}  // namespace macroeco::dist
