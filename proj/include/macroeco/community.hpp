#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "macroeco/error.hpp"
#include "macroeco/ingest.hpp"
#include "macroeco/statcore/descriptive.hpp"

namespace macroeco::community {

enum class Universe {
  Union,     // assets present at the origin or at any compared time
  AtOrigin,  // assets present at the origin only
};

/// Weeks per lag unit; similarity lags are counted in 4-week months.
inline constexpr std::size_t kWeeksPerMonth = 4;

struct SimilaritySeries {
  Date origin;
  std::size_t lag_step = kWeeksPerMonth;  // panel rows per lag unit
  std::vector<double> lags;
  std::vector<double> r_s;
  std::vector<std::size_t> universe;  // asset (column) indices
};

/// r_S between slice 0 and every slice k, on S = log(x + 1).
/// Returns the similarity values and fills `universe` with the columns used.
inline std::vector<double> similarity_profile(std::span<const std::vector<double>> slices, Universe mode,
                                              std::vector<std::size_t>* universe = nullptr) {
  if (slices.empty()) fail(Errc::TooFewLags, "similarity needs at least one slice");
  const std::size_t width = slices.front().size();
  std::vector<std::size_t> cols;
  for (std::size_t a = 0; a < width; ++a) {
    bool keep = slices.front()[a] > 0.0;
    if (mode == Universe::Union) {
      for (const auto& s : slices) {
        if (s.size() != width) fail(Errc::LengthMismatch, "slices differ in width");
        keep = keep || s[a] > 0.0;
      }
    }
    if (keep) cols.push_back(a);
  }
  std::vector<double> s0(cols.size());
  std::vector<double> sk(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) s0[i] = std::log1p(slices.front()[cols[i]]);
  std::vector<double> out;
  out.reserve(slices.size());
  for (const auto& slice : slices) {
    if (slice.size() != width) fail(Errc::LengthMismatch, "slices differ in width");
    for (std::size_t i = 0; i < cols.size(); ++i) sk[i] = std::log1p(slice[cols[i]]);
    out.push_back(stats::pearson(s0, sk));
  }
  if (universe) *universe = std::move(cols);
  return out;
}

struct SimilarityOptions {
  Universe universe = Universe::Union;
  std::size_t lag_step = kWeeksPerMonth;
};

inline SimilaritySeries similarity_decay(const ingest::MarketPanel& panel, Date t0, std::size_t horizon,
                                         const SimilarityOptions& opt = {}) {
  if (opt.lag_step == 0) fail(Errc::InvalidArgument, "lag step must be positive");
  const auto origin = panel.week_index(t0);
  if (!origin) fail(Errc::EmptyPeriod, "origin " + format_date(t0) + " is not a panel week");
  if (*origin + horizon * opt.lag_step >= panel.num_weeks()) {
    fail(Errc::EmptyPeriod, "similarity horizon runs past the end of the panel");
  }
  std::vector<std::vector<double>> slices;
  SimilaritySeries s;
  s.origin = t0;
  s.lag_step = opt.lag_step;
  for (std::size_t k = 0; k <= horizon; ++k) {
    const auto row = panel.week_row(*origin + k * opt.lag_step);
    slices.emplace_back(row.begin(), row.end());
    s.lags.push_back(static_cast<double>(k));
  }
  s.r_s = similarity_profile(slices, opt.universe, &s.universe);
  return s;
}

struct ExponentialFit {
  double amplitude = 0.0;
  double rate = 0.0;  // r_S = amplitude * exp(rate * tau)
  double r_squared = 0.0;  // of the log-linear regression
  std::size_t n = 0;  // points with r_S > 0

  double operator()(double tau) const { return amplitude * std::exp(rate * tau); }
};

struct DecayFit {
  stats::LinearFit linear;
  double linear_rmse = 0.0;
  std::optional<ExponentialFit> exponential;
  double exponential_rmse = 0.0;
  std::string winner;  // "linear" or "exponential"
};

inline constexpr std::size_t kMinDecayLags = 4;

inline DecayFit decay_model_selection(std::span<const double> lags, std::span<const double> r_s) {
  if (lags.size() != r_s.size()) fail(Errc::LengthMismatch, "lags and r_S differ in length");
  if (lags.size() < kMinDecayLags) fail(Errc::TooFewLags, "decay model selection needs >= 4 lags");
  DecayFit fit;
  fit.linear = stats::linear_fit(lags, r_s);
  std::vector<double> lin_pred(lags.size());
  for (std::size_t i = 0; i < lags.size(); ++i) lin_pred[i] = fit.linear(lags[i]);
  fit.linear_rmse = stats::rmse(r_s, lin_pred);

  std::vector<double> t;
  std::vector<double> lr;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (r_s[i] > 0.0) {
      t.push_back(lags[i]);
      lr.push_back(std::log(r_s[i]));
    }
  }
  bool distinct = false;
  for (double v : t) distinct = distinct || v != t.front();
  if (t.size() >= 2 && distinct) {
    const auto ols = stats::linear_fit(t, lr);
    ExponentialFit e{std::exp(ols.intercept), ols.slope, ols.r_squared, t.size()};
    std::vector<double> pred(lags.size());
    for (std::size_t i = 0; i < lags.size(); ++i) pred[i] = e(lags[i]);
    fit.exponential_rmse = stats::rmse(r_s, pred);
    fit.exponential = e;
  }
  fit.winner = fit.exponential && fit.exponential_rmse < fit.linear_rmse ? "exponential" : "linear";
  return fit;
}

inline DecayFit decay_model_selection(const SimilaritySeries& s) {
  return decay_model_selection(s.lags, s.r_s);
}

struct DiversityPoint {
  DateInterval interval;
  std::size_t richness = 0;
  double beta_slope = 0.0;  // per lag unit
};

/// Calendar-year intervals [Jan 1, Dec 31] for each year in [first, last].
inline std::vector<DateInterval> yearly_intervals(int first_year, int last_year) {
  std::vector<DateInterval> out;
  for (int y = first_year; y <= last_year; ++y) out.push_back({make_date(y, 1, 1), make_date(y, 12, 31)});
  return out;
}

inline std::vector<DiversityPoint> beta_vs_alpha(const ingest::MarketPanel& panel,
                                                 std::span<const DateInterval> intervals,
                                                 const SimilarityOptions& opt = {}) {
  std::vector<DiversityPoint> out;
  for (const auto& iv : intervals) {
    const auto [begin, end] = panel.week_range(iv);
    DiversityPoint d{iv, 0, 0.0};
    for (std::size_t a = 0; a < panel.num_assets(); ++a) {
      for (std::size_t w = begin; w < end; ++w) {
        if (panel.present(w, a)) {
          ++d.richness;
          break;
        }
      }
    }
    if (d.richness == 0) fail(Errc::EmptyPeriod, "no active asset in an interval");
    const std::size_t horizon = (end - begin - 1) / opt.lag_step;
    const auto series = similarity_decay(panel, panel.weeks()[begin], horizon, opt);
    d.beta_slope = decay_model_selection(series).linear.slope;
    out.push_back(d);
  }
  return out;
}

struct OccurrencePoint {
  std::size_t asset = 0;
  double occurrence = 0.0;  // active weeks / weeks in period
  double mean_cap = 0.0;    // over active weeks
};

inline std::vector<OccurrencePoint> occurrence_vs_abundance(const ingest::MarketPanel& panel,
                                                            const DateInterval& period) {
  const auto [begin, end] = panel.week_range(period);
  std::vector<OccurrencePoint> out;
  for (std::size_t a = 0; a < panel.num_assets(); ++a) {
    std::size_t active = 0;
    double sum = 0.0;
    for (std::size_t w = begin; w < end; ++w) {
      if (panel.present(w, a)) {
        ++active;
        sum += panel.cap(w, a);
      }
    }
    out.push_back({a, static_cast<double>(active) / static_cast<double>(end - begin),
                   active ? sum / static_cast<double>(active) : 0.0});
  }
  return out;
}

}  // namespace macroeco::community
