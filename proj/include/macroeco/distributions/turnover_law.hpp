#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "macroeco/distributions/dist_fit.hpp"
#include "macroeco/error.hpp"
#include "macroeco/statcore/histogram.hpp"
#include "macroeco/statcore/optimize.hpp"
#include "macroeco/statcore/quadrature.hpp"
#include "macroeco/statcore/random.hpp"
#include "macroeco/statcore/special.hpp"

namespace macroeco::dist {

/// Parameters of the stationary species-turnover law for the ratio
/// lambda = x(t) / x(0):
///
///   P(lambda, t) = C (lambda+1)/lambda * (e^{t/B})^{A/2} / (1 - e^{-t/B})
///                  * [sinh(t/2B) / lambda]^{A+1}
///                  * [4 lambda^2 / ((lambda+1)^2 e^{t/B} - 4 lambda)]^{A+1/2}
///
/// with C = 2^{A-1} / sqrt(pi) * Gamma(A+1/2) / Gamma(A). `lag` is t, in the
/// same time units as B.
struct StdParams {
  double A = 1.0;
  double B = 1.0;
  double lag = 1.0;
};

inline void validate(const StdParams& p) {
  if (!(p.A > 0.0) || !(p.B > 0.0) || !(p.lag > 0.0)) {
    fail(Errc::DomainError, "turnover law needs A > 0, B > 0, t > 0");
  }
}

inline double std_log_constant(double A) {
  return (A - 1.0) * std::numbers::ln2 - 0.5 * std::log(std::numbers::pi) +
         stats::log_gamma(A + 0.5) - stats::log_gamma(A);
}

namespace detail {

// log(2 cosh(r/2))
inline double log_two_cosh_half(double r) {
  const double a = std::fabs(r);
  return 0.5 * a + std::log1p(std::exp(-a));
}

// log sinh(y) for y > 0
inline double log_sinh(double y) { return y + std::log(-std::expm1(-2.0 * y)) - std::numbers::ln2; }

}  // namespace detail

/// Log of the density of r = ln(lambda), P'(r) = e^r P(e^r, t).
///
/// Substituting lambda = e^r collapses the lambda-dependent factors to
/// -2A ln(2 cosh(r/2)) plus a term in sech^2(r/2), which makes the r -> -r
/// symmetry explicit and keeps every piece finite for large |r| or t/B.
inline double std_log_density_r(double r, const StdParams& p, double log_c) {
  const double u = p.lag / p.B;
  const double lch = detail::log_two_cosh_half(r);
  const double log_q = -u + std::log(4.0) - 2.0 * lch;  // ln(e^{-u} sech^2(r/2)) < 0
  return log_c - 2.0 * p.A * lch + 0.5 * p.A * u - std::log(-std::expm1(-u)) +
         (p.A + 1.0) * detail::log_sinh(0.5 * u) +
         (p.A + 0.5) * (std::log(4.0) - u - std::log(-std::expm1(log_q)));
}

inline double std_log_density_r(double r, const StdParams& p) {
  validate(p);
  return std_log_density_r(r, p, std_log_constant(p.A));
}

inline double std_log_pdf(double lambda, const StdParams& p) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(Errc::DomainError, "lambda must be > 0");
  const double r = std::log(lambda);
  return std_log_density_r(r, p) - r;
}

inline double std_pdf(double lambda, const StdParams& p) { return std::exp(std_log_pdf(lambda, p)); }

inline double std_density_r(double r, const StdParams& p) { return std::exp(std_log_density_r(r, p)); }

/// CDF of r = ln(lambda); uses the symmetry of P'(r) about 0.
inline double std_cdf_r(double r, const StdParams& p) {
  validate(p);
  const double log_c = std_log_constant(p.A);
  auto dens = [&](double s) { return std::exp(std_log_density_r(s, p, log_c)); };
  const double half = stats::integrate(dens, 0.0, std::fabs(r), 1e-13);
  return std::clamp(r >= 0.0 ? 0.5 + half : 0.5 - half, 0.0, 1.0);
}

inline double std_cdf(double lambda, const StdParams& p) {
  if (lambda <= 0.0) return 0.0;
  return std_cdf_r(std::log(lambda), p);
}

/// Rejection sampler for r = ln(lambda) with a Cauchy envelope in r whose
/// scale is the half width at half maximum of P'(r). The envelope constant is
/// the maximum of P'/g found on a grid and refined with Brent's method.
class StdSampler {
 public:
  explicit StdSampler(const StdParams& p) : params_(p) {
    validate(p);
    log_c_ = std_log_constant(p.A);
    const double peak = log_density(0.0);
    auto drop = [&](double r) { return peak - log_density(r); };
    double hi = 1e-3;
    while (drop(hi) < std::numbers::ln2 && hi < 1e6) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (drop(mid) < std::numbers::ln2 ? lo : hi) = mid;
    }
    scale_ = std::max(0.5 * (lo + hi), 1e-12);

    auto log_ratio = [&](double r) { return log_density(r) - log_cauchy(r); };
    const double reach = std::max(400.0 * scale_, 40.0 / p.A);
    constexpr int kGrid = 40000;
    const double step = reach / kGrid;
    double best_r = 0.0;
    double best = log_ratio(0.0);
    for (int i = 1; i <= kGrid; ++i) {
      const double r = step * i;
      const double v = log_ratio(r);
      if (v > best) {
        best = v;
        best_r = r;
      }
    }
    const auto refined = stats::minimize_1d([&](double r) { return -log_ratio(r); },
                                            std::max(0.0, best_r - step), best_r + step, 1e-12);
    log_envelope_ = std::max(best, -refined.value) + 1e-6;
  }

  double draw_r(stats::RandomSource& rng) const {
    for (;;) {
      const double r = scale_ * std::tan(std::numbers::pi * (rng.uniform_open() - 0.5));
      const double log_accept = log_density(r) - log_cauchy(r) - log_envelope_;
      if (std::log(rng.uniform_open()) < log_accept) return r;
    }
  }

  double draw(stats::RandomSource& rng) const { return std::exp(draw_r(rng)); }

  double acceptance_rate() const { return std::exp(-log_envelope_); }
  double envelope_scale() const { return scale_; }

 private:
  double log_density(double r) const { return std_log_density_r(r, params_, log_c_); }
  double log_cauchy(double r) const {
    const double z = r / scale_;
    return -std::log(std::numbers::pi * scale_) - std::log1p(z * z);
  }

  StdParams params_;
  double log_c_ = 0.0;
  double scale_ = 1.0;
  double log_envelope_ = 0.0;
};

/// Draws of r = ln(lambda).
inline std::vector<double> std_sample_r(stats::RandomSource& rng, const StdParams& p,
                                        std::size_t n) {
  const StdSampler sampler(p);
  std::vector<double> out(n);
  for (auto& r : out) r = sampler.draw_r(rng);
  return out;
}

inline std::vector<double> std_sample(stats::RandomSource& rng, const StdParams& p, std::size_t n) {
  auto out = std_sample_r(rng, p, n);
  for (auto& v : out) v = std::exp(v);
  return out;
}

/// Observed ratios at one lag.
struct LagSample {
  double lag = 1.0;
  std::vector<double> lambdas;
};

struct StdFit {
  double A = 0.0;
  double B = 0.0;
  double loglik = 0.0;
  std::size_t n = 0;
  std::vector<double> lags;

  StdParams at(double lag) const { return {A, B, lag}; }

  DistFit record() const { return {"turnover", {{"A", A}, {"B", B}}, loglik, n}; }
};

inline constexpr std::size_t kMinStdSamples = 50;

namespace detail {

inline constexpr double kStdHardLo = 1e-4;
inline constexpr double kStdHardHi = 1e4;
inline constexpr double kStdSaneLo = 1e-3;
inline constexpr double kStdSaneHi = 1e3;

template <typename Objective>
std::pair<double, double> fit_std_params(Objective&& neg_objective) {
  // Coarse log-spaced grid over A, B in [0.1, 5] picks the simplex start.
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> start = {0.0, 0.0};
  constexpr int kGrid = 12;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double la = std::log(0.1) + (std::log(5.0) - std::log(0.1)) * i / (kGrid - 1);
      const double lb = std::log(0.1) + (std::log(5.0) - std::log(0.1)) * j / (kGrid - 1);
      const double v = neg_objective(la, lb);
      if (v < best) {
        best = v;
        start = {la, lb};
      }
    }
  }
  if (!std::isfinite(best)) fail(Errc::FitDiverged, "turnover fit: objective not finite on grid");
  auto wrapped = [&](const std::vector<double>& q) {
    if (q[0] < std::log(kStdHardLo) || q[0] > std::log(kStdHardHi) ||
        q[1] < std::log(kStdHardLo) || q[1] > std::log(kStdHardHi)) {
      return std::numeric_limits<double>::infinity();
    }
    return neg_objective(q[0], q[1]);
  };
  stats::SimplexOptions opts;
  opts.tol = 1e-9;
  opts.zero_step = 0.2;
  opts.initial_step = 0.2;
  const auto q = stats::minimize_nd(wrapped, start, opts);
  const double A = std::exp(q[0]);
  const double B = std::exp(q[1]);
  if (!(A > kStdSaneLo && A < kStdSaneHi && B > kStdSaneLo && B < kStdSaneHi) ||
      !std::isfinite(wrapped(q))) {
    fail(Errc::FitDiverged, "turnover fit ran to a parameter boundary (A=" + std::to_string(A) +
                                ", B=" + std::to_string(B) + ")");
  }
  return {A, B};
}

}  // namespace detail

/// Joint maximum-likelihood (A, B) over all lags, each observation using its
/// own lag t.
inline StdFit std_fit(std::span<const LagSample> samples) {
  if (samples.empty()) fail(Errc::TooFewSamples, "turnover fit: no lags");
  std::vector<std::pair<double, std::vector<double>>> logs;
  std::size_t n = 0;
  for (const auto& s : samples) {
    if (s.lambdas.size() < kMinStdSamples) {
      fail(Errc::TooFewSamples, "turnover fit needs >= 50 ratios per lag");
    }
    if (!(s.lag > 0.0)) fail(Errc::DomainError, "lag must be positive");
    std::vector<double> r;
    r.reserve(s.lambdas.size());
    for (double l : s.lambdas) {
      if (!(l > 0.0)) fail(Errc::NonPositiveSample, "ratios must be positive");
      r.push_back(std::log(l));
    }
    n += r.size();
    logs.emplace_back(s.lag, std::move(r));
  }
  // log P(lambda) = log P'(r) - r; the -sum(r) term does not depend on (A, B).
  double sum_r = 0.0;
  for (const auto& [lag, r] : logs) {
    for (double v : r) sum_r += v;
  }
  auto neg = [&](double log_a, double log_b) {
    const StdParams base{std::exp(log_a), std::exp(log_b), 1.0};
    const double log_c = std_log_constant(base.A);
    double ll = 0.0;
    for (const auto& [lag, r] : logs) {
      StdParams p = base;
      p.lag = lag;
      for (double v : r) ll += std_log_density_r(v, p, log_c);
    }
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };
  const auto [A, B] = detail::fit_std_params(neg);
  StdFit fit;
  fit.A = A;
  fit.B = B;
  fit.n = n;
  fit.loglik = -neg(std::log(A), std::log(B)) - sum_r;
  for (const auto& s : samples) fit.lags.push_back(s.lag);
  return fit;
}

/// Independent (A, B) for every lag.
inline std::vector<StdFit> std_fit_per_lag(std::span<const LagSample> samples) {
  std::vector<StdFit> out;
  for (const auto& s : samples) out.push_back(std_fit(std::span(&s, 1)));
  return out;
}

/// Least squares of P'(r) against the density histogram of r (fixed bin width).
inline StdFit std_fit_histogram(const LagSample& sample, double bin_width = 0.25) {
  if (sample.lambdas.size() < kMinStdSamples) {
    fail(Errc::TooFewSamples, "turnover fit needs >= 50 ratios per lag");
  }
  std::vector<double> r;
  for (double l : sample.lambdas) {
    if (!(l > 0.0)) fail(Errc::NonPositiveSample, "ratios must be positive");
    r.push_back(std::log(l));
  }
  const auto [mn, mx] = std::minmax_element(r.begin(), r.end());
  const double lo = std::floor(*mn / bin_width) * bin_width;
  double hi = std::ceil(*mx / bin_width) * bin_width;
  if (!(hi > lo)) hi = lo + bin_width;
  const auto bins = static_cast<std::size_t>(std::llround((hi - lo) / bin_width));
  const auto hist = stats::make_histogram(r, stats::uniform_edges(lo, hi, bins), true);
  const auto heights = hist.heights();
  auto neg = [&](double log_a, double log_b) {
    const StdParams p{std::exp(log_a), std::exp(log_b), sample.lag};
    const double log_c = std_log_constant(p.A);
    double ss = 0.0;
    for (std::size_t b = 0; b < hist.bins(); ++b) {
      const double d = heights[b] - std::exp(std_log_density_r(hist.center(b), p, log_c));
      ss += d * d;
    }
    return std::isfinite(ss) ? ss : std::numeric_limits<double>::infinity();
  };
  const auto [A, B] = detail::fit_std_params(neg);
  StdFit fit;
  fit.A = A;
  fit.B = B;
  fit.n = r.size();
  fit.lags = {sample.lag};
  const StdParams p{A, B, sample.lag};
  for (double l : sample.lambdas) fit.loglik += std_log_pdf(l, p);
  return fit;
}

}  // namespace macroeco::dist
