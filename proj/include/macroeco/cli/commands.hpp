#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "macroeco/cli/json_io.hpp"
#include "macroeco/cli/output.hpp"
#include "macroeco/codependence.hpp"
#include "macroeco/community.hpp"
#include "macroeco/csv.hpp"
#include "macroeco/distributions.hpp"
#include "macroeco/ingest.hpp"
#include "macroeco/neutralsim.hpp"
#include "macroeco/sad.hpp"
#include "macroeco/spr.hpp"
#include "macroeco/turnover.hpp"

namespace macroeco::cli {

struct RegimeFlags {
  std::string radiation_end;
  std::string stationary_start;
  std::string stationary_end;
  std::string growth_start;

  ingest::RegimeSegmentation resolve() const {
    const std::array<const std::string*, 4> raw{&radiation_end, &stationary_start, &stationary_end, &growth_start};
    std::size_t given = 0;
    for (const auto* r : raw) given += r->empty() ? 0 : 1;
    if (given == 0) return ingest::segment_regimes();
    if (given != 4) throw UsageError("regime overrides need all four dates");
    std::array<Date, 4> d{};
    for (std::size_t i = 0; i < 4; ++i) d[i] = parse_flag_date(*raw[i]);
    return ingest::segment_regimes(d);
  }

  static Date parse_flag_date(const std::string& text) {
    const auto d = parse_date(text);
    if (!d) throw UsageError("bad date '" + text + "' (expected YYYY-MM-DD)");
    return *d;
  }
};

struct PeriodFlags {
  std::string start;  // default: stationary start
  std::string end;    // default: stationary end

  DateInterval resolve(const ingest::RegimeSegmentation& regimes) const {
    DateInterval p = regimes.stationary();
    if (!start.empty()) p.first = RegimeFlags::parse_flag_date(start);
    if (!end.empty()) p.last = RegimeFlags::parse_flag_date(end);
    if (p.last < p.first) throw UsageError("period end precedes period start");
    return p;
  }
};

inline ingest::MarketPanel read_panel_file(const std::string& path) {
  if (path.empty()) throw UsageError("no input file given");
  if (!std::filesystem::is_regular_file(path)) throw UsageError("input not found: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return ingest::load_panel(in);
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string input;
  std::string fill = "constant";  // constant | linear | none
  std::size_t smooth_weeks = 4;
  std::string denominator = "current";  // current | previous
};

inline OutputSet cmd_ingest(const IngestArgs& a, Json& params) {
  params = {{"fill", a.fill}, {"smooth_weeks", a.smooth_weeks}, {"denominator", a.denominator}};
  if (a.smooth_weeks < 1) throw UsageError("--smooth-weeks must be >= 1");
  auto panel = read_panel_file(a.input);
  if (a.fill == "constant") {
    panel = ingest::fill_gaps(std::move(panel), ingest::GapFill::Constant);
  } else if (a.fill == "linear") {
    panel = ingest::fill_gaps(std::move(panel), ingest::GapFill::Linear);
  } else if (a.fill != "none") {
    throw UsageError("--fill must be constant, linear or none");
  }
  const auto denom = a.denominator == "previous" ? ingest::RateDenominator::Previous : ingest::RateDenominator::Current;
  OutputSet out;
  ingest::write_panel(out.file("panel.csv"), panel);
  const auto rates = ingest::activity_and_rates(panel, a.smooth_weeks, denom);
  ingest::write_rates(out.file("rates.csv"), rates);
  return out;
}

// --------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string which;
  std::string panel;
  RegimeFlags regimes;
  PeriodFlags period;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  // sad
  std::string aggregation = "mean";  // mean | week
  std::size_t bootstrap = 0;
  // spr
  std::size_t min_width = 1;
  std::size_t max_width = 10;
  bool sliding = false;
  // std
  std::vector<std::size_t> lags = turnover::default_lags();
  bool raw_cap = false;
  bool thinned = false;
  double bin_width = 0.25;
  // community
  std::string origin;
  std::size_t horizon = 0;  // months; 0 = as many as the period holds
  std::string universe = "union";
  int first_year = 2015;
  int last_year = 2019;
  // correlations
  std::size_t top_k = 25;
  std::size_t n_null = 1;
  std::size_t tau = 1;
  std::size_t realizations = 10;
};

inline OutputSet analyze_sad(const ingest::MarketPanel& panel, const DateInterval& period, const AnalyzeArgs& a,
                             Json& params) {
  params["aggregation"] = a.aggregation;
  params["bootstrap"] = a.bootstrap;
  sad::Aggregation agg = sad::Aggregation::PeriodMean;
  if (a.aggregation == "week") {
    agg = sad::Aggregation::PerWeek;
  } else if (a.aggregation != "mean") {
    throw UsageError("--aggregation must be mean or week");
  }
  const auto sample = sad::build_sad(panel, period, agg);
  sad::FitOptions fo;
  fo.bootstrap_replicates = a.bootstrap;
  fo.seed = a.seed;
  const auto r = sad::fit_and_test(sample, fo);
  OutputSet out;
  Json j;
  j["period"] = to_json(r.period);
  j["n"] = r.n;
  j["lognormal"] = to_json(r.lognormal);
  j["lognormal"]["ks"] = to_json(r.ks_lognormal);
  j["fisher"] = to_json(r.fisher);
  j["fisher"]["ks"] = to_json(r.ks_fisher);
  j["verdict"] = r.verdict;
  j["mode"] = sad::to_string(r.mode);
  out.json("sad_report.json", j);

  const dist::LogNormalParams lp{r.lognormal.param("mu"), r.lognormal.param("sigma")};
  const dist::FisherParams fp{r.fisher.param("c"), r.fisher.param("x_min")};
  auto& h = out.file("sad_histogram.csv");
  h << "bin_lo,bin_hi,count,density,lognormal_density,fisher_density\n";
  const auto heights = r.histogram.heights();
  for (std::size_t b = 0; b < r.histogram.bins(); ++b) {
    const double lo = r.histogram.edges[b];
    const double hi = r.histogram.edges[b + 1];
    const double mid = std::sqrt(lo * hi);
    h << csv::number(lo) << ',' << csv::number(hi) << ',' << r.histogram.counts[b] << ',' << csv::number(heights[b])
      << ',' << csv::number(dist::lognormal_pdf(mid, lp)) << ',' << csv::number(dist::fisher_pdf(mid, fp)) << '\n';
  }
  return out;
}

inline OutputSet analyze_spr(const ingest::MarketPanel& panel, const DateInterval& period, const AnalyzeArgs& a,
                             Json& params) {
  params["min_width"] = a.min_width;
  params["max_width"] = a.max_width;
  params["sliding"] = a.sliding;
  spr::ScanOptions so;
  so.min_width = a.min_width;
  so.max_width = a.max_width;
  so.sliding = a.sliding;
  const auto pts = spr::scan_windows(panel, period, so);
  OutputSet out;
  auto& p = out.file("spr_points.csv");
  p << "width,window_start,window_end,total_cap,n_species\n";
  for (const auto& pt : pts) {
    p << pt.width << ',' << format_date(pt.window.first) << ',' << format_date(pt.window.last) << ','
      << csv::number(pt.total_cap) << ',' << pt.n_species << '\n';
  }
  const auto fit = spr::fit_spr(pts);
  Json j;
  j["period"] = to_json(period);
  j["points"] = pts.size();
  j["log_form"] = {{"alpha", num(fit.log_form.alpha)},
                   {"rmse", num(fit.log_form.rmse)},
                   {"r_squared", num(fit.log_form.r_squared)},
                   {"at_bound", fit.log_form.at_bound}};
  j["power_form"] = {{"k", num(fit.power_form.k)},
                     {"z", num(fit.power_form.z)},
                     {"rmse", num(fit.power_form.rmse)},
                     {"r_squared", num(fit.power_form.r_squared)},
                     {"z_out_of_range", fit.power_form.z_out_of_range}};
  j["elasticity"] = num(fit.elasticity);
  j["weak_dependence"] = fit.weak_dependence;
  out.json("spr_fit.json", j);

  double lo = pts.front().total_cap;
  double hi = lo;
  for (const auto& pt : pts) {
    lo = std::min(lo, pt.total_cap);
    hi = std::max(hi, pt.total_cap);
  }
  auto& c = out.file("spr_curves.csv");
  c << "total_cap,log_form,power_form\n";
  constexpr int kSamples = 100;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / kSamples);
    c << csv::number(x) << ',' << csv::number(spr::log_form(x, fit.log_form.alpha)) << ','
      << csv::number(fit.power_form.k * std::pow(x, fit.power_form.z)) << '\n';
  }
  return out;
}

inline OutputSet analyze_std(const ingest::MarketPanel& panel, const DateInterval& period, const AnalyzeArgs& a,
                             Json& params) {
  params["lags"] = a.lags;
  params["raw_cap"] = a.raw_cap;
  params["thinned"] = a.thinned;
  params["bin_width"] = a.bin_width;
  turnover::CollectOptions co;
  co.raw_cap = a.raw_cap;
  co.thinned = a.thinned;
  const auto samples = turnover::collect_ratios(panel, period, a.lags, co);
  turnover::ReportOptions ro;
  ro.bin_width = a.bin_width;
  ro.threads = a.threads;
  const auto rep = turnover::std_report(samples, ro);
  OutputSet out;
  Json j;
  j["period"] = to_json(period);
  j["lags"] = Json::array();
  for (const auto& lr : rep.lags) {
    Json l{{"lag", lr.lag}, {"n", lr.n}, {"asymmetry", num(lr.asymmetry)}};
    if (lr.fit) {
      l["fit"] = to_json(*lr.fit);
      l["implied_sad_gamma_shape"] = num(turnover::implied_sad(*lr.fit).shape);
    } else {
      l["fit"] = nullptr;
      l["fit_error"] = lr.fit_error;
    }
    j["lags"].push_back(l);
    auto& f = out.file("std_lag_" + std::to_string(lr.lag) + ".csv");
    f << "r_bin_center,empirical_density,fitted_density\n";
    const auto emp = lr.histogram.heights();
    const auto fitted = lr.fitted_density();
    for (std::size_t b = 0; b < lr.histogram.bins(); ++b) {
      f << csv::number(lr.histogram.center(b)) << ',' << csv::number(emp[b]) << ','
        << (fitted.empty() ? std::string() : csv::number(fitted[b])) << '\n';
    }
  }
  if (rep.joint) {
    j["joint"] = to_json(*rep.joint);
  } else {
    j["joint"] = nullptr;
    j["joint_error"] = rep.joint_error;
  }
  out.json("std_fit.json", j);
  return out;
}

inline OutputSet analyze_community(const ingest::MarketPanel& panel, const DateInterval& period,
                                   const AnalyzeArgs& a, Json& params) {
  community::SimilarityOptions so;
  if (a.universe == "origin") {
    so.universe = community::Universe::AtOrigin;
  } else if (a.universe != "union") {
    throw UsageError("--universe must be union or origin");
  }
  const auto [begin, end] = panel.week_range(period);
  std::size_t origin = begin;
  if (!a.origin.empty()) {
    const auto w = panel.week_index(RegimeFlags::parse_flag_date(a.origin));
    if (!w) throw UsageError("--origin is not a panel week");
    origin = *w;
  }
  const std::size_t room = origin < end ? (end - 1 - origin) / so.lag_step : 0;
  const std::size_t horizon = a.horizon ? a.horizon : room;
  params["origin"] = format_date(panel.weeks()[origin]);
  params["horizon_months"] = horizon;
  params["weeks_per_month"] = so.lag_step;
  params["universe"] = a.universe;
  params["first_year"] = a.first_year;
  params["last_year"] = a.last_year;
  params["cap_unit"] = "USD";

  const auto series = community::similarity_decay(panel, panel.weeks()[origin], horizon, so);
  const auto fit = community::decay_model_selection(series);
  OutputSet out;
  auto& s = out.file("similarity.csv");
  s << "lag_months,r_s,linear_fit,exponential_fit\n";
  for (std::size_t k = 0; k < series.lags.size(); ++k) {
    s << csv::number(series.lags[k]) << ',' << csv::number(series.r_s[k]) << ','
      << csv::number(fit.linear(series.lags[k])) << ','
      << (fit.exponential ? csv::number((*fit.exponential)(series.lags[k])) : std::string()) << '\n';
  }
  Json j;
  j["period"] = to_json(period);
  j["origin"] = format_date(series.origin);
  j["universe_size"] = series.universe.size();
  j["decay"] = to_json(fit);

  j["beta_vs_alpha"] = Json::array();
  j["beta_vs_alpha_skipped"] = Json::array();
  auto& ba = out.file("beta_alpha.csv");
  ba << "interval_start,interval_end,richness,beta_slope\n";
  for (const auto& iv : community::yearly_intervals(a.first_year, a.last_year)) {
    try {
      const auto pts = community::beta_vs_alpha(panel, std::span(&iv, 1), so);
      const auto& d = pts.front();
      ba << format_date(d.interval.first) << ',' << format_date(d.interval.last) << ',' << d.richness << ','
         << csv::number(d.beta_slope) << '\n';
      j["beta_vs_alpha"].push_back({{"interval", to_json(d.interval)}, {"richness", d.richness}, {"beta_slope", num(d.beta_slope)}});
    } catch (const Error& e) {
      j["beta_vs_alpha_skipped"].push_back({{"interval", to_json(iv)}, {"reason", e.what()}});
    }
  }
  out.json("community_fit.json", j);

  auto& o = out.file("occurrence.csv");
  o << "asset_id,occurrence,mean_cap\n";
  for (const auto& pt : community::occurrence_vs_abundance(panel, period)) {
    if (pt.occurrence == 0.0) continue;
    o << csv::quote(panel.assets()[pt.asset].id) << ',' << csv::number(pt.occurrence) << ','
      << csv::number(pt.mean_cap) << '\n';
  }
  return out;
}

inline OutputSet analyze_correlations(const ingest::MarketPanel& panel, const DateInterval& period,
                                      const AnalyzeArgs& a, Json& params) {
  params["top_k"] = a.top_k;
  params["n_null"] = a.n_null;
  params["tau"] = a.tau;
  params["realizations"] = a.realizations;
  params["order"] = "total capitalization over the period (USD), ascending";
  const auto subset = codependence::select_persistent(panel, period);
  codependence::CorrelationOptions co;
  co.top_k = a.top_k;
  co.n_null = a.n_null;
  co.seed = a.seed;
  const auto rep = codependence::correlation_matrix(panel, subset, period, co);
  codependence::AutocorrelationOptions ao;
  ao.tau = a.tau;
  ao.n_realizations = a.realizations;
  ao.seed = a.seed;
  const auto ac = codependence::autocorrelation(panel, subset, period, ao);

  OutputSet out;
  auto write_matrix = [&](std::ostringstream& f, std::size_t from) {
    f << "asset_id";
    for (std::size_t i = from; i < rep.ids.size(); ++i) f << ',' << csv::quote(rep.ids[i]);
    f << '\n';
    for (std::size_t i = from; i < rep.ids.size(); ++i) {
      f << csv::quote(rep.ids[i]);
      for (std::size_t k = from; k < rep.ids.size(); ++k) f << ',' << csv::number(rep.matrix[i][k]);
      f << '\n';
    }
  };
  write_matrix(out.file("corr_matrix.csv"), 0);
  write_matrix(out.file("corr_topk.csv"), rep.ids.size() - rep.top_k);
  auto& v = out.file("corr_values.csv");
  v << "set,value\n";
  for (double x : rep.off_diagonal()) v << "all," << csv::number(x) << '\n';
  for (double x : rep.top_k_off_diagonal()) v << "top_k," << csv::number(x) << '\n';
  for (double x : rep.null_values) v << "null," << csv::number(x) << '\n';
  auto& au = out.file("autocorrelation.csv");
  au << "asset_id,total_cap,r_a,significant\n";
  for (const auto& r : ac.rows) {
    au << csv::quote(r.asset_id) << ',' << csv::number(r.total_cap) << ',' << csv::number(r.r_a) << ','
       << (r.significant ? 1 : 0) << '\n';
  }
  auto band = [](const codependence::NullSummary& n) {
    return Json{{"p01", num(n.p01)}, {"p99", num(n.p99)}, {"mean", num(n.mean)},
                {"standard_error", num(n.standard_error)}, {"n", n.n}};
  };
  Json j;
  j["period"] = to_json(period);
  j["persistent_assets"] = subset.size();
  j["matrix_assets"] = rep.ids.size();
  j["excluded_constant"] = rep.excluded;
  j["top_k"] = rep.top_k;
  j["top_k_ids"] = std::vector<std::string>(rep.ids.end() - static_cast<long>(rep.top_k), rep.ids.end());
  j["null"] = band(rep.null);
  j["fraction_inside_null"] = num(rep.fraction_inside_null());
  const auto all = rep.off_diagonal();
  const auto top = rep.top_k_off_diagonal();
  j["mean_correlation"] = all.empty() ? Json(nullptr) : num(stats::mean(all));
  j["mean_top_k_correlation"] = top.empty() ? Json(nullptr) : num(stats::mean(top));
  j["autocorrelation"] = {{"tau", a.tau},
                          {"null", band(ac.null)},
                          {"fraction_inside_null", num(ac.fraction_inside_null())},
                          {"excluded_constant", ac.excluded}};
  out.json("corr_summary.json", j);
  return out;
}

inline OutputSet cmd_analyze(const AnalyzeArgs& a, Json& params) {
  const auto regimes = a.regimes.resolve();
  const auto period = a.period.resolve(regimes);
  params = {{"which", a.which},
            {"period", to_json(period)},
            {"regimes",
             {{"radiation_end", format_date(regimes.radiation_end)},
              {"stationary_start", format_date(regimes.stationary_start)},
              {"stationary_end", format_date(regimes.stationary_end)},
              {"growth_start", format_date(regimes.growth_start)}}}};
  const auto panel = read_panel_file(a.panel);
  if (a.which == "sad") return analyze_sad(panel, period, a, params);
  if (a.which == "spr") return analyze_spr(panel, period, a, params);
  if (a.which == "std") return analyze_std(panel, period, a, params);
  if (a.which == "community") return analyze_community(panel, period, a, params);
  if (a.which == "correlations") return analyze_correlations(panel, period, a, params);
  throw UsageError("unknown analysis '" + a.which + "'");
}

// -------------------------------------------------------------- simulate

struct SimulateArgs {
  neutral::SimConfig config;
  std::string negative = "clamp";
  double target = 0.2;
};

/// Model parameters of the reference run, recorded every 500 generations
/// after a 20000-generation burn-in.
inline neutral::SimConfig reference_preset() {
  auto c = neutral::reference_config();
  c.burn_in = 20000;
  c.stride = 500;
  c.generations = 40000;
  return c;
}

/// key = value lines; '#' starts a comment.
inline void apply_config_file(const std::string& path, SimulateArgs& a) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = ingest::trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key = value");
    const auto key = ingest::trim(text.substr(0, eq));
    const auto val = ingest::trim(text.substr(eq + 1));
    const auto v = csv::parse_number(val);
    auto need = [&] {
      if (!v) throw UsageError(path + ":" + std::to_string(no) + ": bad number '" + val + "'");
      return *v;
    };
    auto count = [&] {
      const double d = need();
      if (d < 0 || d != std::floor(d)) throw UsageError(path + ":" + std::to_string(no) + ": expected a count");
      return static_cast<std::size_t>(d);
    };
    auto& c = a.config;
    if (key == "N") c.N = need();
    else if (key == "s" || key == "species") c.s = count();
    else if (key == "rho") c.rho = need();
    else if (key == "sigma") c.sigma = need();
    else if (key == "b") c.b = need();
    else if (key == "generations") c.generations = count();
    else if (key == "burn_in") c.burn_in = count();
    else if (key == "stride") c.stride = count();
    else if (key == "target") a.target = need();
    else if (key == "negative") a.negative = val;
    else throw UsageError(path + ":" + std::to_string(no) + ": unknown key '" + key + "'");
  }
}

inline Json sim_params(const SimulateArgs& a) {
  const auto& c = a.config;
  return {{"N", c.N},       {"s", c.s},         {"rho", c.rho},          {"sigma", c.sigma},
          {"b", c.b},       {"generations", c.generations}, {"burn_in", c.burn_in}, {"stride", c.stride},
          {"negative", a.negative}, {"target", a.target}};
}

inline neutral::SimRun simulate_run(SimulateArgs a) {
  if (a.negative == "resample") {
    a.config.negative = neutral::NegativeRaw::Resample;
  } else if (a.negative != "clamp") {
    throw UsageError("--negative must be clamp or resample");
  }
  try {
    neutral::validate(a.config);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return neutral::run(a.config);
}

inline void write_run(OutputSet& out, const neutral::SimRun& run) {
  ingest::write_panel(out.file("panel.csv"), neutral::to_panel(run));
  neutral::write_events(out.file("events.csv"), run);
}

inline OutputSet cmd_simulate(const SimulateArgs& a, Json& params, std::ostream& warn) {
  params = sim_params(a);
  if (a.config.sigma * a.config.sigma < 3.0) {
    warn << "warning: sigma < sqrt(3); exponential r_S decay is only established for sigma > sqrt(3)\n";
  }
  const auto run = simulate_run(a);
  OutputSet out;
  write_run(out, run);
  Json j;
  j["last_generation"] = run.generations.empty() ? 0 : run.generations.back();
  j["recorded_rows"] = run.trajectory.size();
  j["max_relative_sum_error"] = num(run.max_sum_error);
  std::size_t ext = 0;
  std::size_t ext_real = 0;
  std::size_t spec = 0;
  for (const auto& e : run.events) {
    if (e.kind == neutral::EventKind::Extinction) {
      ++ext;
      ext_real += e.realized ? 1 : 0;
    } else {
      ++spec;
    }
  }
  j["events"] = {{"extinctions", ext}, {"realized_extinctions", ext_real}, {"speciations", spec}};
  auto& rs = out.file("rs_decay.csv");
  rs << "lag,generations,r_s,linear_fit,exponential_fit\n";
  j["target_reached"] = false;
  j["decay"] = nullptr;
  try {
    auto decay = neutral::model_rs_decay(run, std::nullopt);
    const auto& r = decay.series.r_s;
    const auto hit = std::find_if(r.begin(), r.end(), [&](double v) { return v < a.target; });
    j["target_reached"] = hit != r.end();
    if (hit != r.end()) {
      const auto keep = std::max<std::size_t>(static_cast<std::size_t>(hit - r.begin()) + 1, community::kMinDecayLags);
      decay.series.r_s.resize(keep);
      decay.series.lags.resize(keep);
      decay.fit = community::decay_model_selection(decay.series);
    }
    j["decay"] = to_json(decay.fit);
    for (std::size_t k = 0; k < decay.series.r_s.size(); ++k) {
      const double lag = decay.series.lags[k];
      rs << k << ',' << k * a.config.stride << ',' << csv::number(decay.series.r_s[k]) << ','
         << csv::number(decay.fit.linear(lag)) << ','
         << (decay.fit.exponential ? csv::number((*decay.fit.exponential)(lag)) : std::string()) << '\n';
    }
  } catch (const Error& e) {
    j["decay_error"] = e.what();
  }
  out.json("rs_fit.json", j);
  return out;
}

// --------------------------------------------------------------- fixture

struct FixtureArgs {
  std::string kind;
  std::uint64_t seed = 0;
  std::size_t n = 10000;
  double mu = -9.0;
  double sigma = 2.3;
  double c = 1.0;
  double x_min = 1e-4;
  std::size_t assets = 100;  // churn-panel: active assets per week
  std::size_t churn = 5;     // churn-panel: assets replaced per week
  std::size_t weeks = 52;
  double N = 100.0;          // neutral-panel
  std::size_t species = 20;
  std::size_t generations = 200;
  std::string start = "2014-11-02";
};

inline std::string fixture_id(const char* prefix, std::size_t i, std::size_t n) {
  const std::size_t digits = std::max<std::size_t>(5, std::to_string(n).size());
  const auto s = std::to_string(i + 1);
  return prefix + std::string(digits - s.size(), '0') + s;
}

/// Single-week panel whose market shares follow the given draws.
inline void write_share_panel(std::ostringstream& f, Date week, const std::vector<double>& draws, const char* prefix) {
  constexpr double kDollars = 1e12;
  f << "date,asset_id,name,market_cap\n";
  for (std::size_t i = 0; i < draws.size(); ++i) {
    f << format_date(week) << ',' << fixture_id(prefix, i, draws.size()) << ",," << csv::number(kDollars * draws[i]) << '\n';
  }
}

inline OutputSet cmd_fixture(const FixtureArgs& a, Json& params) {
  const Date start = RegimeFlags::parse_flag_date(a.start);
  stats::RandomSource rng(a.seed, 0x66697874ULL);
  OutputSet out;
  params = {{"kind", a.kind}, {"start", a.start}};
  if (a.kind == "lognormal-sad") {
    params["mu"] = a.mu;
    params["sigma"] = a.sigma;
    params["n"] = a.n;
    params["law"] = "market_cap = 1e12 * exp(Normal(mu, sigma)), one week";
    if (!(a.sigma > 0.0) || a.n < 1) throw UsageError("lognormal-sad needs sigma > 0 and n >= 1");
    write_share_panel(out.file("panel.csv"), start, dist::lognormal_sample(rng, {a.mu, a.sigma}, a.n), "ln");
  } else if (a.kind == "fisher-sad") {
    params["c"] = a.c;
    params["x_min"] = a.x_min;
    params["n"] = a.n;
    params["law"] = "market_cap = 1e12 * x, x ~ exp(-c x) / x on [x_min, inf), one week";
    if (!(a.c > 0.0) || !(a.x_min > 0.0) || a.n < 1) throw UsageError("fisher-sad needs c > 0, x_min > 0, n >= 1");
    write_share_panel(out.file("panel.csv"), start, dist::fisher_sample(rng, {a.c, a.x_min}, a.n), "fs");
  } else if (a.kind == "churn-panel") {
    params["assets"] = a.assets;
    params["churn"] = a.churn;
    params["weeks"] = a.weeks;
    params["law"] = "week t holds assets [t*churn, t*churn + assets), caps log-normal per asset";
    if (a.assets < 1 || a.weeks < 2 || a.churn > a.assets) throw UsageError("churn-panel needs assets >= churn, weeks >= 2");
    const std::size_t total = a.assets + a.churn * (a.weeks - 1);
    std::vector<double> cap(total);
    for (double& v : cap) v = std::exp(rng.normal(15.0, 2.0));
    auto& f = out.file("panel.csv");
    f << "date,asset_id,name,market_cap\n";
    for (std::size_t t = 0; t < a.weeks; ++t) {
      const auto date = format_date(start + std::chrono::days{7 * static_cast<long>(t)});
      for (std::size_t i = t * a.churn; i < t * a.churn + a.assets; ++i) {
        f << date << ',' << fixture_id("ch", i, total) << ",," << csv::number(cap[i]) << '\n';
      }
    }
    const double rate = static_cast<double>(a.churn) / static_cast<double>(a.assets);
    out.json("expected.json", {{"n_active", a.assets}, {"speciation_rate", rate}, {"extinction_rate", rate}});
  } else if (a.kind == "neutral-panel") {
    SimulateArgs s;
    s.config.N = a.N;
    s.config.s = a.species;
    s.config.generations = a.generations;
    s.config.seed = a.seed;
    params["simulation"] = sim_params(s);
    write_run(out, simulate_run(s));
  } else {
    throw UsageError("unknown fixture kind '" + a.kind + "'");
  }
  return out;
}

}  // namespace macroeco::cli
