#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "macroeco/distributions/gamma.hpp"
#include "macroeco/distributions/turnover_law.hpp"
#include "macroeco/error.hpp"
#include "macroeco/ingest.hpp"
#include "macroeco/parallel.hpp"
#include "macroeco/sad.hpp"
#include "macroeco/statcore/histogram.hpp"

namespace macroeco::turnover {

struct TurnoverSample {
  std::size_t lag = 1;  // weeks
  std::vector<double> ratios;
  DateInterval base_period;
};

inline const std::vector<std::size_t>& default_lags() {
  static const std::vector<std::size_t> lags{1, 2, 4, 8, 16, 32};
  return lags;
}

struct CollectOptions {
  bool raw_cap = false;  // ratios of capitalization instead of market share
  bool thinned = false;  // origins spaced one lag apart instead of every week
};

/// lambda = x(t0 + lag) / x(t0) for every asset present at both ends, with
/// t0 ranging over the base period and t0 + lag anywhere in the panel.
inline std::vector<TurnoverSample> collect_ratios(const ingest::MarketPanel& panel, const DateInterval& base_period,
                                                  std::span<const std::size_t> lags = default_lags(),
                                                  const CollectOptions& opt = {}) {
  const auto [begin, end] = panel.week_range(base_period);
  std::vector<std::vector<double>> share(panel.num_weeks());
  auto value = [&](std::size_t w) -> const std::vector<double>& {
    if (share[w].empty()) {
      if (opt.raw_cap) {
        const auto row = panel.week_row(w);
        share[w].assign(row.begin(), row.end());
      } else {
        share[w] = sad::market_shares(panel, w);
      }
    }
    return share[w];
  };
  std::vector<TurnoverSample> out;
  for (std::size_t lag : lags) {
    if (lag == 0) fail(Errc::InvalidArgument, "lags must be positive");
    TurnoverSample s{lag, {}, base_period};
    const std::size_t step = opt.thinned ? lag : 1;
    for (std::size_t t0 = begin; t0 < end && t0 + lag < panel.num_weeks(); t0 += step) {
      const auto& x0 = value(t0);
      const auto& x1 = value(t0 + lag);
      for (std::size_t a = 0; a < x0.size(); ++a) {
        if (x0[a] > 0.0 && x1[a] > 0.0) s.ratios.push_back(x1[a] / x0[a]);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct ReportOptions {
  double bin_width = 0.25;
  bool joint_fit = true;  // also fit one (A, B) across all lags
  std::size_t threads = 1;
};

struct LagReport {
  std::size_t lag = 0;
  std::size_t n = 0;
  stats::Histogram histogram;  // r = log lambda, density mode
  std::optional<dist::StdFit> fit;
  std::string fit_error;  // set when the fit failed
  double asymmetry = 0.0;  // (mass at r < 0) - (mass at r > 0)

  /// Fitted P'(r) at each bin center, or empty without a fit.
  std::vector<double> fitted_density() const {
    std::vector<double> out;
    if (!fit) return out;
    const auto p = fit->at(static_cast<double>(lag));
    for (std::size_t b = 0; b < histogram.bins(); ++b) out.push_back(dist::std_density_r(histogram.center(b), p));
    return out;
  }
};

struct StdReport {
  std::vector<LagReport> lags;
  std::optional<dist::StdFit> joint;
  std::string joint_error;
};

inline stats::Histogram r_histogram(std::span<const double> r, double bin_width) {
  if (!(bin_width > 0.0)) fail(Errc::InvalidArgument, "bin width must be positive");
  const auto [mn, mx] = std::minmax_element(r.begin(), r.end());
  const double lo = std::floor(*mn / bin_width) * bin_width;
  double hi = std::ceil(*mx / bin_width) * bin_width;
  if (!(hi > lo)) hi = lo + bin_width;
  const auto bins = static_cast<std::size_t>(std::llround((hi - lo) / bin_width));
  return stats::make_histogram(r, stats::uniform_edges(lo, hi, bins), true);
}

inline dist::LagSample to_lag_sample(const TurnoverSample& s) {
  return {static_cast<double>(s.lag), s.ratios};
}

inline StdReport std_report(std::span<const TurnoverSample> samples, const ReportOptions& opt = {}) {
  StdReport report;
  report.lags.resize(samples.size());
  std::vector<dist::LagSample> all;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.ratios.size() < dist::kMinStdSamples) {
      fail(Errc::TooFewSamples, "lag " + std::to_string(s.lag) + " has fewer than 50 ratios");
    }
    auto& lr = report.lags[i];
    lr.lag = s.lag;
    lr.n = s.ratios.size();
    std::vector<double> r;
    r.reserve(s.ratios.size());
    std::size_t below = 0;
    std::size_t above = 0;
    for (double l : s.ratios) {
      if (!(l > 0.0)) fail(Errc::NonPositiveSample, "ratios must be positive");
      r.push_back(std::log(l));
      below += r.back() < 0.0 ? 1 : 0;
      above += r.back() > 0.0 ? 1 : 0;
    }
    lr.asymmetry = (static_cast<double>(below) - static_cast<double>(above)) / static_cast<double>(r.size());
    lr.histogram = r_histogram(r, opt.bin_width);
    all.push_back(to_lag_sample(s));
  }
  // one extra task for the joint fit
  const std::size_t tasks = all.size() + (opt.joint_fit && !all.empty() ? 1 : 0);
  parallel_for(tasks, opt.threads, [&](std::size_t i) {
    auto& fit = i < all.size() ? report.lags[i].fit : report.joint;
    auto& err = i < all.size() ? report.lags[i].fit_error : report.joint_error;
    try {
      fit = i < all.size() ? dist::std_fit(std::span(&all[i], 1)) : dist::std_fit(all);
    } catch (const Error& e) {
      err = e.what();
    }
  });
  return report;
}

/// Stationary abundance distribution implied by a fitted turnover law: a
/// Gamma density with shape A (the scale is not identified by the ratios).
inline dist::GammaParams implied_sad(const dist::StdFit& fit, double scale = 1.0) {
  return {fit.A, scale};
}

}  // namespace macroeco::turnover
