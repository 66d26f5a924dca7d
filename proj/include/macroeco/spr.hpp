#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "macroeco/error.hpp"
#include "macroeco/ingest.hpp"
#include "macroeco/statcore/descriptive.hpp"
#include "macroeco/statcore/optimize.hpp"

namespace macroeco::spr {

struct SprPoint {
  DateInterval window;
  std::size_t width = 0;  // weeks
  double total_cap = 0.0;  // mean of weekly totals over the window
  std::size_t n_species = 0;  // assets active in any week of the window
};

struct ScanOptions {
  std::size_t min_width = 1;
  std::size_t max_width = 10;
  bool sliding = false;  // every start week instead of non-overlapping windows
};

inline std::vector<SprPoint> scan_windows(const ingest::MarketPanel& panel, const DateInterval& period,
                                          const ScanOptions& opt = {}) {
  if (opt.min_width < 1 || opt.max_width < opt.min_width) {
    fail(Errc::InvalidArgument, "window widths must satisfy 1 <= min <= max");
  }
  const auto [begin, end] = panel.week_range(period);
  std::vector<SprPoint> out;
  std::vector<char> seen(panel.num_assets());
  for (std::size_t width = opt.min_width; width <= opt.max_width; ++width) {
    const std::size_t step = opt.sliding ? 1 : width;
    for (std::size_t start = begin; start + width <= end; start += step) {
      std::fill(seen.begin(), seen.end(), 0);
      double cap = 0.0;
      for (std::size_t w = start; w < start + width; ++w) {
        cap += panel.total_cap(w);
        for (std::size_t a = 0; a < panel.num_assets(); ++a) seen[a] |= panel.present(w, a) ? 1 : 0;
      }
      const auto species = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
      if (species == 0) continue;
      out.push_back({{panel.weeks()[start], panel.weeks()[start + width - 1]}, width,
                     cap / static_cast<double>(width), species});
    }
  }
  if (out.empty()) fail(Errc::EmptyPeriod, "no complete window inside the requested period");
  return out;
}

/// N(x) = alpha log(1 + x / alpha).
inline double log_form(double x, double alpha) { return alpha * std::log1p(x / alpha); }

struct LogFormFit {
  double alpha = 0.0;
  double rmse = 0.0;
  double r_squared = 0.0;
  bool at_bound = false;  // alpha hit the search limit (linear or vanishing regime)
};

struct PowerFormFit {
  double k = 0.0;
  double z = 0.0;
  double rmse = 0.0;
  double r_squared = 0.0;  // of the log-log regression
  bool z_out_of_range = false;
};

struct SprFit {
  LogFormFit log_form;
  PowerFormFit power_form;
  double elasticity = 0.0;  // d log N / d log x of the log form at the median x
  bool weak_dependence = false;
};

inline constexpr std::size_t kMinSprPoints = 5;
inline constexpr double kWeakElasticity = 0.1;

inline SprFit fit_spr(std::span<const SprPoint> points) {
  if (points.size() < kMinSprPoints) fail(Errc::DegenerateRange, "fit_spr needs at least 5 points");
  std::vector<double> x;
  std::vector<double> n;
  for (const auto& p : points) {
    if (!(p.total_cap > 0.0) || p.n_species == 0) fail(Errc::DomainError, "SPR points need x > 0, N >= 1");
    x.push_back(p.total_cap);
    n.push_back(static_cast<double>(p.n_species));
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (!(*xmax > *xmin * (1.0 + 1e-9))) fail(Errc::DegenerateRange, "fit_spr: capitalization does not vary");

  SprFit fit;
  const double n_mean = stats::mean(n);
  double sst = 0.0;
  for (double v : n) sst += (v - n_mean) * (v - n_mean);

  auto sse_at = [&](double log_alpha) {
    const double alpha = std::exp(log_alpha);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = n[i] - log_form(x[i], alpha);
      s += d * d;
    }
    return s;
  };
  const double lo = std::log(1e-9 * *xmin);
  const double hi = std::log(1e6 * *xmax);
  constexpr int kGrid = 400;
  double best = lo;
  double best_val = sse_at(lo);
  for (int g = 1; g <= kGrid; ++g) {
    const double la = lo + (hi - lo) * g / kGrid;
    const double v = sse_at(la);
    if (v < best_val) {
      best = la;
      best_val = v;
    }
  }
  stats::SimplexOptions sopt;
  sopt.tol = 1e-12;
  sopt.zero_step = 0.5;
  sopt.initial_step = 0.05;
  const auto la = stats::minimize_nd(
      [&](const std::vector<double>& v) { return sse_at(std::clamp(v[0], lo, hi)); }, {best}, sopt);
  const double log_alpha = std::clamp(la[0], lo, hi);
  fit.log_form.alpha = std::exp(log_alpha);
  const double sse = sse_at(log_alpha);
  fit.log_form.rmse = std::sqrt(sse / static_cast<double>(x.size()));
  fit.log_form.r_squared = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 0.0;
  fit.log_form.at_bound = hi - log_alpha < 1e-3 || log_alpha - lo < 1e-3;

  std::vector<double> lx(x.size());
  std::vector<double> ln(n.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ln[i] = std::log(n[i]);
  }
  const auto ols = stats::linear_fit(lx, ln);
  fit.power_form.z = ols.slope;
  fit.power_form.k = std::exp(ols.intercept);
  fit.power_form.r_squared = ols.r_squared;
  double psse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = n[i] - fit.power_form.k * std::pow(x[i], fit.power_form.z);
    psse += d * d;
  }
  fit.power_form.rmse = std::sqrt(psse / static_cast<double>(x.size()));
  fit.power_form.z_out_of_range = fit.power_form.z < 0.0 || fit.power_form.z > 1.0;

  const double xm = stats::quantile(x, 0.5);
  const double ratio = xm / fit.log_form.alpha;
  fit.elasticity = ratio / ((1.0 + ratio) * std::log1p(ratio));
  if (!std::isfinite(fit.elasticity)) fit.elasticity = 1.0;
  fit.weak_dependence = fit.elasticity < kWeakElasticity && std::fabs(fit.power_form.z) < kWeakElasticity;
  return fit;
}

}  // namespace macroeco::spr
