#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "macroeco/error.hpp"
#include "macroeco/ingest.hpp"
#include "macroeco/statcore/descriptive.hpp"
#include "macroeco/statcore/random.hpp"

namespace macroeco::codependence {

struct VariationSeries {
  std::size_t asset = 0;
  std::string asset_id;
  std::vector<Date> weeks;
  std::vector<double> values;  // ln C(t) - ln C(t-1)
};

/// V(t) for every week t of the period whose predecessor is also in the
/// period, skipping weeks where either capitalization is absent.
inline VariationSeries variation_series(const ingest::MarketPanel& panel, std::size_t asset,
                                        const DateInterval& period) {
  const auto [begin, end] = panel.week_range(period);
  VariationSeries v{asset, panel.assets()[asset].id, {}, {}};
  for (std::size_t w = begin + 1; w < end; ++w) {
    if (panel.present(w, asset) && panel.present(w - 1, asset)) {
      v.weeks.push_back(panel.weeks()[w]);
      v.values.push_back(std::log(panel.cap(w, asset)) - std::log(panel.cap(w - 1, asset)));
    }
  }
  return v;
}

/// Assets present in every week of the period.
inline std::vector<std::size_t> select_persistent(const ingest::MarketPanel& panel, const DateInterval& period) {
  const auto [begin, end] = panel.week_range(period);
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < panel.num_assets(); ++a) {
    bool all = true;
    for (std::size_t w = begin; w < end && all; ++w) all = panel.present(w, a);
    if (all) out.push_back(a);
  }
  if (out.empty()) fail(Errc::EmptySelection, "no asset is active through the whole period");
  return out;
}

inline double period_total_cap(const ingest::MarketPanel& panel, std::size_t asset, const DateInterval& period) {
  const auto [begin, end] = panel.week_range(period);
  double sum = 0.0;
  for (std::size_t w = begin; w < end; ++w) sum += panel.cap(w, asset);
  return sum;
}

namespace detail {

/// Centred, unit-norm copy; empty when the series is constant.
inline std::vector<double> standardize(std::span<const double> x) {
  if (x.size() < 2) return {};
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) return {};
  const double m = stats::mean(x);
  std::vector<double> z(x.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    z[i] = x[i] - m;
    ss += z[i] * z[i];
  }
  if (!(ss > 0.0)) return {};
  const double inv = 1.0 / std::sqrt(ss);
  for (double& v : z) v *= inv;
  return z;
}

inline double dot_clamped(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return std::clamp(s, -1.0, 1.0);
}

inline stats::RandomSource shuffle_stream(std::uint64_t seed, std::uint64_t replicate, std::size_t asset) {
  return stats::RandomSource(seed, stats::RandomSource::mix(replicate) ^ stats::RandomSource::mix(asset + 1));
}

}  // namespace detail

struct NullSummary {
  double p01 = 0.0;
  double p99 = 0.0;
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t n = 0;
};

inline NullSummary summarize_null(std::vector<double> values) {
  if (values.empty()) fail(Errc::TooFewSamples, "empty null distribution");
  NullSummary s;
  s.n = values.size();
  s.mean = stats::mean(values);
  s.standard_error = values.size() > 1 ? std::sqrt(stats::variance(values) / static_cast<double>(values.size())) : 0.0;
  std::sort(values.begin(), values.end());
  s.p01 = stats::quantile_sorted(values, 0.01);
  s.p99 = stats::quantile_sorted(values, 0.99);
  return s;
}

struct CorrelationOptions {
  std::size_t top_k = 25;
  std::size_t n_null = 1;
  std::uint64_t seed = 0;
};

struct CorrelationReport {
  std::vector<std::size_t> order;  // asset indices, ascending period capitalization
  std::vector<std::string> ids;
  std::vector<double> total_cap;
  std::vector<std::vector<double>> matrix;
  std::vector<std::string> excluded;  // constant V series
  std::vector<double> null_values;    // pooled off-diagonal correlations of shuffled series
  NullSummary null;
  std::size_t top_k = 0;  // the last top_k entries of `order`

  std::vector<double> off_diagonal() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      for (std::size_t j = i + 1; j < matrix.size(); ++j) out.push_back(matrix[i][j]);
    }
    return out;
  }

  std::vector<double> top_k_off_diagonal() const {
    std::vector<double> out;
    const std::size_t from = matrix.size() - top_k;
    for (std::size_t i = from; i < matrix.size(); ++i) {
      for (std::size_t j = i + 1; j < matrix.size(); ++j) out.push_back(matrix[i][j]);
    }
    return out;
  }

  double fraction_inside_null() const {
    const auto v = off_diagonal();
    if (v.empty()) return 1.0;
    const auto inside = std::count_if(v.begin(), v.end(), [&](double r) { return r >= null.p01 && r <= null.p99; });
    return static_cast<double>(inside) / static_cast<double>(v.size());
  }
};

inline CorrelationReport correlation_matrix(const ingest::MarketPanel& panel, std::span<const std::size_t> subset,
                                            const DateInterval& period, const CorrelationOptions& opt = {}) {
  if (opt.n_null < 1) fail(Errc::InvalidArgument, "n_null must be >= 1");
  struct Item {
    std::size_t asset;
    double cap;
    std::vector<double> v;
  };
  std::vector<Item> items;
  CorrelationReport rep;
  std::size_t length = 0;
  for (std::size_t a : subset) {
    auto series = variation_series(panel, a, period);
    if (length == 0) length = series.values.size();
    if (series.values.size() != length) {
      fail(Errc::LengthMismatch, "asset " + series.asset_id + " is not active through the whole period");
    }
    if (detail::standardize(series.values).empty()) {
      rep.excluded.push_back(series.asset_id);
      continue;
    }
    items.push_back({a, period_total_cap(panel, a, period), std::move(series.values)});
  }
  if (items.size() < 2) fail(Errc::ZeroVariance, "fewer than two assets with varying capitalization");
  std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return x.cap != y.cap ? x.cap < y.cap : x.asset < y.asset;
  });
  const std::size_t n = items.size();
  std::vector<std::vector<double>> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.order.push_back(items[i].asset);
    rep.ids.push_back(panel.assets()[items[i].asset].id);
    rep.total_cap.push_back(items[i].cap);
    z[i] = detail::standardize(items[i].v);
  }
  rep.matrix.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) rep.matrix[i][j] = rep.matrix[j][i] = detail::dot_clamped(z[i], z[j]);
  }
  std::vector<std::vector<double>> shuffled(n);
  for (std::size_t r = 0; r < opt.n_null; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      auto rng = detail::shuffle_stream(opt.seed, r, items[i].asset);
      shuffled[i] = z[i];
      stats::shuffle_in_place(std::span(shuffled[i]), rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) rep.null_values.push_back(detail::dot_clamped(shuffled[i], shuffled[j]));
    }
  }
  rep.null = summarize_null(rep.null_values);
  rep.top_k = std::min(opt.top_k, n);
  return rep;
}

struct AutocorrelationOptions {
  std::size_t tau = 1;
  std::size_t n_realizations = 10;
  std::uint64_t seed = 0;
};

struct AutocorrelationRow {
  std::size_t asset = 0;
  std::string asset_id;
  double total_cap = 0.0;
  double r_a = 0.0;
  bool significant = false;  // outside the null band
};

struct AutocorrelationReport {
  std::vector<AutocorrelationRow> rows;  // ascending capitalization
  std::vector<std::string> excluded;
  std::vector<double> null_values;
  NullSummary null;

  double fraction_inside_null() const {
    if (rows.empty()) return 1.0;
    const auto inside = std::count_if(rows.begin(), rows.end(), [](const AutocorrelationRow& r) { return !r.significant; });
    return static_cast<double>(inside) / static_cast<double>(rows.size());
  }
};

/// Lag-tau autocorrelation of a series, or nullopt when either window is constant.
inline std::optional<double> lagged_correlation(std::span<const double> v, std::size_t tau) {
  const auto head = v.first(v.size() - tau);
  const auto tail = v.subspan(tau);
  try {
    return stats::pearson(head, tail);
  } catch (const Error& e) {
    if (e.code() == Errc::ZeroVariance) return std::nullopt;
    throw;
  }
}

inline AutocorrelationReport autocorrelation(const ingest::MarketPanel& panel, std::span<const std::size_t> subset,
                                             const DateInterval& period, const AutocorrelationOptions& opt = {}) {
  if (opt.tau < 1) fail(Errc::InvalidArgument, "tau must be >= 1");
  if (opt.n_realizations < 1) fail(Errc::InvalidArgument, "n_realizations must be >= 1");
  AutocorrelationReport rep;
  for (std::size_t a : subset) {
    const auto series = variation_series(panel, a, period);
    if (series.values.size() < opt.tau + 3) {
      fail(Errc::SeriesTooShort, "series of " + series.asset_id + " is too short for the lag");
    }
    const auto r = lagged_correlation(series.values, opt.tau);
    if (!r) {
      rep.excluded.push_back(series.asset_id);
      continue;
    }
    rep.rows.push_back({a, series.asset_id, period_total_cap(panel, a, period), *r, false});
    auto copy = series.values;
    for (std::size_t k = 0; k < opt.n_realizations; ++k) {
      auto rng = detail::shuffle_stream(opt.seed, k, a);
      stats::shuffle_in_place(std::span(copy), rng);
      if (const auto nr = lagged_correlation(copy, opt.tau)) rep.null_values.push_back(*nr);
    }
  }
  if (rep.rows.empty()) fail(Errc::ZeroVariance, "no asset with a varying series");
  rep.null = summarize_null(rep.null_values);
  for (auto& row : rep.rows) row.significant = row.r_a < rep.null.p01 || row.r_a > rep.null.p99;
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const AutocorrelationRow& x, const AutocorrelationRow& y) {
    return x.total_cap != y.total_cap ? x.total_cap < y.total_cap : x.asset < y.asset;
  });
  return rep;
}

}  // namespace macroeco::codependence
