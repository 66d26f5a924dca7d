#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "macroeco/distributions/dist_fit.hpp"
#include "macroeco/error.hpp"
#include "macroeco/statcore/random.hpp"
#include "macroeco/statcore/special.hpp"

namespace macroeco::dist {

/// Continuous Fisher law p(x) = e^{-cx} / (x E1(c x_min)) on [x_min, inf).
struct FisherParams {
  double c = 1.0;
  double x_min = 1.0;
};

inline void validate(const FisherParams& p) {
  if (!(p.c > 0.0) || !(p.x_min > 0.0)) fail(Errc::DomainError, "Fisher law needs c > 0, x_min > 0");
}

inline double fisher_log_norm(const FisherParams& p) {
  return stats::log_exp_integral_e1(p.c * p.x_min);
}

inline double fisher_log_pdf(double x, const FisherParams& p) {
  validate(p);
  if (!(x >= p.x_min)) fail(Errc::DomainError, "Fisher pdf evaluated below x_min");
  return -p.c * x - std::log(x) - fisher_log_norm(p);
}

inline double fisher_pdf(double x, const FisherParams& p) { return std::exp(fisher_log_pdf(x, p)); }

inline double fisher_cdf(double x, const FisherParams& p) {
  validate(p);
  if (x <= p.x_min) return 0.0;
  // 1 - E1(cx)/E1(c x_min), in log space
  const double log_ratio = stats::log_exp_integral_e1(p.c * x) - fisher_log_norm(p);
  return -std::expm1(log_ratio);
}

/// Exact sampler. Below x = 1/c the log-abundance u = ln x has density
/// proportional to exp(-c e^u) <= 1, sampled by uniform-in-u rejection; above
/// 1/c a shifted exponential proposal is thinned by (1/c)/x.
inline double fisher_draw(stats::RandomSource& rng, const FisherParams& p) {
  const double knee = 1.0 / p.c;
  if (p.x_min >= knee) {
    for (;;) {
      const double x = p.x_min + rng.exponential(p.c);
      if (rng.uniform() * x < p.x_min) return x;
    }
  }
  const double tail_mass = stats::exp_integral_e1(1.0);
  const double body_mass = stats::exp_integral_e1(p.c * p.x_min) - tail_mass;
  const double p_body = body_mass / (body_mass + tail_mass);
  const double u_lo = std::log(p.x_min);
  const double u_hi = std::log(knee);
  // pick the piece once; each piece then rejects within itself
  if (rng.uniform() < p_body) {
    for (;;) {
      const double x = std::exp(rng.uniform(u_lo, u_hi));
      if (rng.uniform() < std::exp(-p.c * x)) return std::max(x, p.x_min);
    }
  }
  for (;;) {
    const double x = knee + rng.exponential(p.c);
    if (rng.uniform() * x < knee) return x;
  }
}

inline std::vector<double> fisher_sample(stats::RandomSource& rng, const FisherParams& p,
                                         std::size_t n) {
  validate(p);
  std::vector<double> out(n);
  for (auto& x : out) x = fisher_draw(rng, p);
  return out;
}

struct FisherFit {
  FisherParams params;
  double loglik = 0.0;
  std::size_t n = 0;

  DistFit record() const {
    return {"fisher", {{"c", params.c}, {"x_min", params.x_min}}, loglik, n};
  }
};

inline double fisher_loglik(std::span<const double> sample, const FisherParams& p) {
  double ll = 0.0;
  for (double x : sample) ll += fisher_log_pdf(x, p);
  return ll;
}

/// Maximum-likelihood c for a given truncation (default: the sample minimum).
/// The score equation mean(x) = 1 / (c e^{c x_min} E1(c x_min)) has a unique
/// root whenever the sample is not constant; it is bracketed and bisected in
/// log c.
inline FisherFit fisher_fit(std::span<const double> sample, std::optional<double> x_min = {}) {
  if (sample.size() < 2) fail(Errc::TooFewSamples, "fisher_fit needs at least two values");
  double sum = 0.0;
  double lo_val = sample.front();
  for (double x : sample) {
    if (!(x > 0.0)) fail(Errc::NonPositiveSample, "fisher_fit needs positive values");
    sum += x;
    lo_val = std::min(lo_val, x);
  }
  const double xm = x_min.value_or(lo_val);
  if (!(xm > 0.0) || xm > lo_val) fail(Errc::DomainError, "x_min must lie in (0, min(sample)]");
  const double m = sum / static_cast<double>(sample.size());
  if (!(m > xm)) fail(Errc::FitDiverged, "fisher_fit: sample is concentrated at x_min");

  auto implied_mean = [&](double log_c) {
    const double c = std::exp(log_c);
    return 1.0 / (c * stats::exp_integral_e1_scaled(c * xm));
  };
  double lo = -std::log(m);
  double hi = lo;
  while (implied_mean(lo) <= m) lo -= 2.0;
  while (implied_mean(hi) > m) hi += 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (implied_mean(mid) > m ? lo : hi) = mid;
  }
  FisherFit fit;
  fit.params = {std::exp(0.5 * (lo + hi)), xm};
  fit.n = sample.size();
  fit.loglik = fisher_loglik(sample, fit.params);
  return fit;
}

}  // namespace macroeco::dist
