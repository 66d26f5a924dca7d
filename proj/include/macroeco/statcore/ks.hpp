#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "macroeco/error.hpp"
#include "macroeco/statcore/random.hpp"

namespace macroeco::stats {

enum class KsMethod { Asymptotic, Bootstrap };

struct KsResult {
  double statistic = 0.0;  // D
  double p_value = 1.0;
  std::size_t n = 0;
  KsMethod method = KsMethod::Asymptotic;
};

using Cdf = std::function<double(double)>;

/// Kolmogorov survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
inline double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series converges slowly; Q is 1 to double precision here
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// One-sample KS distance between a sample and a continuous CDF.
template <typename F>
double ks_statistic(std::span<const double> sample, F&& cdf) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = std::clamp(static_cast<double>(cdf(sorted[i])), 0.0, 1.0);
    const double upper = static_cast<double>(i + 1) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    d = std::max({d, upper, lower});
  }
  return std::clamp(d, 0.0, 1.0);
}

inline constexpr std::size_t kMinKsSamples = 5;

/// Asymptotic KS test, p = Q(sqrt(n) D).
template <typename F>
KsResult ks_test(std::span<const double> sample, F&& cdf) {
  if (sample.size() < kMinKsSamples) fail(Errc::TooFewSamples, "ks_test needs n >= 5");
  KsResult r;
  r.n = sample.size();
  r.statistic = ks_statistic(sample, cdf);
  r.p_value = kolmogorov_q(std::sqrt(static_cast<double>(r.n)) * r.statistic);
  r.method = KsMethod::Asymptotic;
  return r;
}

/// Parametric bootstrap: `generate` draws a replicate sample of size n from the
/// fitted model; `refit` re-estimates the model on it and returns its CDF.
/// p = fraction of replicate statistics D* >= D.
struct KsBootstrap {
  std::size_t replicates = 200;
  std::function<std::vector<double>(RandomSource&, std::size_t)> generate;
  std::function<Cdf(std::span<const double>)> refit;
  std::uint64_t seed = 0;
};

inline KsResult ks_test(std::span<const double> sample, const Cdf& cdf, const KsBootstrap& boot) {
  if (sample.size() < kMinKsSamples) fail(Errc::TooFewSamples, "ks_test needs n >= 5");
  if (boot.replicates == 0 || !boot.generate || !boot.refit) {
    fail(Errc::InvalidArgument, "bootstrap needs replicates, a generator and a refit hook");
  }
  KsResult r;
  r.n = sample.size();
  r.statistic = ks_statistic(sample, cdf);
  r.method = KsMethod::Bootstrap;
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < boot.replicates; ++b) {
    RandomSource rng(boot.seed, RandomSource::mix(b));
    const auto replicate = boot.generate(rng, r.n);
    const Cdf refitted = boot.refit(replicate);
    if (ks_statistic(replicate, refitted) >= r.statistic) ++exceed;
  }
  r.p_value = static_cast<double>(exceed) / static_cast<double>(boot.replicates);
  return r;
}

}  // namespace macroeco::stats
