#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "macroeco/distributions/dist_fit.hpp"
#include "macroeco/distributions/fisher.hpp"
#include "macroeco/distributions/lognormal.hpp"
#include "macroeco/error.hpp"
#include "macroeco/ingest.hpp"
#include "macroeco/statcore/histogram.hpp"
#include "macroeco/statcore/ks.hpp"

namespace macroeco::sad {

enum class Aggregation {
  PerWeek,     // every (week, active asset) share is one value
  PeriodMean,  // one value per asset: its mean share over the weeks it is active
};

struct SadSample {
  DateInterval period;
  std::vector<double> values;
  std::size_t n = 0;
};

/// Market shares of every asset in one week (absent assets get 0).
inline std::vector<double> market_shares(const ingest::MarketPanel& panel, std::size_t week) {
  const auto row = panel.week_row(week);
  const double total = panel.total_cap(week);
  std::vector<double> out(row.size(), 0.0);
  if (!(total > 0.0)) return out;
  for (std::size_t a = 0; a < row.size(); ++a) out[a] = row[a] / total;
  return out;
}

inline SadSample build_sad(const ingest::MarketPanel& panel, const DateInterval& period,
                           Aggregation aggregation = Aggregation::PeriodMean) {
  const auto [begin, end] = panel.week_range(period);
  SadSample s{period, {}, 0};
  std::vector<double> sum(panel.num_assets(), 0.0);
  std::vector<std::size_t> weeks_active(panel.num_assets(), 0);
  for (std::size_t w = begin; w < end; ++w) {
    const auto shares = market_shares(panel, w);
    for (std::size_t a = 0; a < shares.size(); ++a) {
      if (!(shares[a] > 0.0)) continue;
      if (aggregation == Aggregation::PerWeek) {
        s.values.push_back(shares[a]);
      } else {
        sum[a] += shares[a];
        ++weeks_active[a];
      }
    }
  }
  if (aggregation == Aggregation::PeriodMean) {
    for (std::size_t a = 0; a < sum.size(); ++a) {
      if (weeks_active[a] > 0) s.values.push_back(sum[a] / static_cast<double>(weeks_active[a]));
    }
  }
  if (s.values.empty()) fail(Errc::EmptyPeriod, "no active asset in the requested period");
  s.n = s.values.size();
  return s;
}

enum class ModeShape { Monotone, InteriorMode };

inline const char* to_string(ModeShape m) {
  return m == ModeShape::Monotone ? "monotone" : "interior_mode";
}

/// Interior mode iff the tallest bin is neither the first nor the last.
/// Ties resolve to the left-most tallest bin.
inline ModeShape classify_mode(const stats::Histogram& h) {
  const auto heights = h.heights();
  if (heights.size() < 3) return ModeShape::Monotone;
  const auto it = std::max_element(heights.begin(), heights.end());
  const auto idx = static_cast<std::size_t>(it - heights.begin());
  return idx == 0 || idx + 1 == heights.size() ? ModeShape::Monotone : ModeShape::InteriorMode;
}

struct LogBinning {
  std::size_t min_bins = 8;
  std::uint64_t min_edge_count = 10;  // sparser edge bins are merged inward
};

/// Density histogram of x on logarithmically spaced bins (bin count by
/// Doane's rule on log x). Heights are per unit x.
inline stats::Histogram log_binned_histogram(std::span<const double> sample, LogBinning opt = {}) {
  if (sample.size() < 2) fail(Errc::TooFewSamples, "log histogram needs at least two values");
  std::vector<double> logs;
  logs.reserve(sample.size());
  for (double x : sample) {
    if (!(x > 0.0)) fail(Errc::NonPositiveSample, "log histogram needs positive values");
    logs.push_back(std::log(x));
  }
  const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  const double lo = std::log(*lo_it);
  const double hi = std::log(*hi_it);
  if (!(hi > lo)) fail(Errc::DegenerateRange, "log histogram of a constant sample");
  const std::size_t bins = stats::doane_bins(logs, opt.min_bins);
  auto log_edges = stats::uniform_edges(lo, hi, bins);
  std::vector<double> edges(log_edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = std::exp(log_edges[i]);
  edges.front() = *lo_it;
  edges.back() = *hi_it;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) fail(Errc::DegenerateRange, "log histogram range too narrow");
  }
  auto h = stats::make_histogram(sample, std::move(edges), true);
  while (h.counts.size() > 2 && h.counts.front() < opt.min_edge_count) {
    h.counts[1] += h.counts[0];
    h.counts.erase(h.counts.begin());
    h.edges.erase(h.edges.begin() + 1);
  }
  while (h.counts.size() > 2 && h.counts.back() < opt.min_edge_count) {
    h.counts[h.counts.size() - 2] += h.counts.back();
    h.counts.pop_back();
    h.edges.erase(h.edges.end() - 2);
  }
  return h;
}

struct FitOptions {
  std::size_t bootstrap_replicates = 0;  // 0 keeps the asymptotic KS p-value
  std::uint64_t seed = 0;
  LogBinning binning{};
};

inline constexpr std::size_t kMinSadSamples = 30;

struct SadReport {
  DateInterval period;
  std::size_t n = 0;
  dist::DistFit lognormal;
  dist::DistFit fisher;
  stats::KsResult ks_lognormal;
  stats::KsResult ks_fisher;
  std::string verdict;  // family with the higher log-likelihood
  ModeShape mode = ModeShape::Monotone;
  stats::Histogram histogram;
};

inline SadReport fit_and_test(const SadSample& sample, const FitOptions& opt = {}) {
  if (sample.values.size() < kMinSadSamples) fail(Errc::TooFewSamples, "fit_and_test needs n >= 30");
  const std::span<const double> xs(sample.values);
  const auto ln = dist::lognormal_fit(xs);
  const auto fi = dist::fisher_fit(xs);

  SadReport r;
  r.period = sample.period;
  r.n = xs.size();
  r.lognormal = ln.record();
  r.fisher = fi.record();
  const stats::Cdf ln_cdf = [p = ln.params](double x) { return dist::lognormal_cdf(x, p); };
  const stats::Cdf fi_cdf = [p = fi.params](double x) { return dist::fisher_cdf(x, p); };
  if (opt.bootstrap_replicates == 0) {
    r.ks_lognormal = stats::ks_test(xs, ln_cdf);
    r.ks_fisher = stats::ks_test(xs, fi_cdf);
  } else {
    stats::KsBootstrap ln_boot{
        opt.bootstrap_replicates,
        [p = ln.params](stats::RandomSource& rng, std::size_t n) { return dist::lognormal_sample(rng, p, n); },
        [](std::span<const double> s) -> stats::Cdf {
          return [p = dist::lognormal_fit(s).params](double x) { return dist::lognormal_cdf(x, p); };
        },
        opt.seed};
    stats::KsBootstrap fi_boot{
        opt.bootstrap_replicates,
        [p = fi.params](stats::RandomSource& rng, std::size_t n) { return dist::fisher_sample(rng, p, n); },
        [](std::span<const double> s) -> stats::Cdf {
          return [p = dist::fisher_fit(s).params](double x) { return dist::fisher_cdf(x, p); };
        },
        opt.seed + 1};
    r.ks_lognormal = stats::ks_test(xs, ln_cdf, ln_boot);
    r.ks_fisher = stats::ks_test(xs, fi_cdf, fi_boot);
  }
  r.verdict = ln.loglik >= fi.loglik ? "lognormal" : "fisher";
  r.histogram = log_binned_histogram(xs, opt.binning);
  r.mode = classify_mode(r.histogram);
  return r;
}

}  // namespace macroeco::sad
