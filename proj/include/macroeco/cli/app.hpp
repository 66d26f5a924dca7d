#pragma once

#include <chrono>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "macroeco/cli/commands.hpp"

namespace macroeco::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct GlobalFlags {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool force = false;
  bool timing = false;
  std::string out_dir = "macroeco_out";
};

inline void add_regime_flags(CLI::App& sub, RegimeFlags& r, PeriodFlags& p) {
  sub.add_option("--radiation-end", r.radiation_end, "Last week of the radiation regime (YYYY-MM-DD)");
  sub.add_option("--stationary-start", r.stationary_start, "First week of the stationary regime");
  sub.add_option("--stationary-end", r.stationary_end, "Last week of the stationary regime");
  sub.add_option("--growth-start", r.growth_start, "First week of the growth regime");
  sub.add_option("--start", p.start, "Analysis period start (default: stationary start)");
  sub.add_option("--end", p.end, "Analysis period end (default: stationary end)");
}

/// Runs the command line and returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Macroecological analysis of asset panels and neutral community simulation", "macroeco"};
  app.set_version_flag("--version", std::string(MACROECO_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--force", g.force, "Overwrite existing outputs");
  app.add_flag("--timing", g.timing, "Record wall-clock time in the manifest");
  app.add_option("-o,--out-dir", g.out_dir, "Output directory");

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Build a weekly panel and activity rates from snapshot rows");
  ingest->add_option("-i,--input", ingest_args.input, "Snapshot CSV")->required();
  ingest->add_option("--fill", ingest_args.fill, "Gap filling: constant, linear or none")
      ->check(CLI::IsMember({"constant", "linear", "none"}));
  ingest->add_option("--smooth-weeks", ingest_args.smooth_weeks, "Trailing window for rate smoothing")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--denominator", ingest_args.denominator, "Rate denominator: current or previous")
      ->check(CLI::IsMember({"current", "previous"}));

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Run one analysis on a panel");
  analyze->add_option("which", an.which, "sad, spr, std, community or correlations")
      ->required()
      ->check(CLI::IsMember({"sad", "spr", "std", "community", "correlations"}));
  analyze->add_option("-p,--panel", an.panel, "Panel CSV")->required();
  add_regime_flags(*analyze, an.regimes, an.period);
  analyze->add_option("--aggregation", an.aggregation, "sad: mean or week")->check(CLI::IsMember({"mean", "week"}));
  analyze->add_option("--bootstrap", an.bootstrap, "sad: parametric bootstrap replicates for KS");
  analyze->add_option("--min-width", an.min_width, "spr: smallest window in weeks");
  analyze->add_option("--max-width", an.max_width, "spr: largest window in weeks");
  analyze->add_flag("--sliding", an.sliding, "spr: overlapping windows");
  analyze->add_option("--lags", an.lags, "std: lags in weeks")->delimiter(',');
  analyze->add_flag("--raw-cap", an.raw_cap, "std: ratios of raw capitalization instead of shares");
  analyze->add_flag("--thinned", an.thinned, "std: non-overlapping base weeks");
  analyze->add_option("--bin-width", an.bin_width, "std: histogram bin width in r")->check(CLI::PositiveNumber);
  analyze->add_option("--origin", an.origin, "community: origin week");
  analyze->add_option("--horizon", an.horizon, "community: months of lag");
  analyze->add_option("--universe", an.universe, "community: union or origin")
      ->check(CLI::IsMember({"union", "origin"}));
  analyze->add_option("--first-year", an.first_year, "community: first calendar year for beta vs alpha");
  analyze->add_option("--last-year", an.last_year, "community: last calendar year for beta vs alpha");
  analyze->add_option("--top-k", an.top_k, "correlations: largest assets in the top block");
  analyze->add_option("--null-shuffles", an.n_null, "correlations: shuffled replicates for the null band");
  analyze->add_option("--tau", an.tau, "correlations: autocorrelation lag in weeks")->check(CLI::PositiveNumber);
  analyze->add_option("--realizations", an.realizations, "correlations: shuffles per asset for the autocorrelation null");

  SimulateArgs sim;
  std::string preset;
  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run the neutral community model");
  simulate->add_option("--preset", preset, "Named configuration")->check(CLI::IsMember({"fig6"}));
  simulate->add_option("--config", config_path, "key = value file applied after the preset");
  auto* o_N = simulate->add_option("--N", sim.config.N, "Total abundance");
  auto* o_s = simulate->add_option("--species", sim.config.s, "Number of species");
  auto* o_rho = simulate->add_option("--rho", sim.config.rho, "Drift");
  auto* o_sigma = simulate->add_option("--sigma", sim.config.sigma, "Noise amplitude");
  auto* o_b = simulate->add_option("--b", sim.config.b, "Immigration");
  auto* o_gen = simulate->add_option("--generations", sim.config.generations, "Recorded generations");
  auto* o_burn = simulate->add_option("--burn-in", sim.config.burn_in, "Generations discarded before recording");
  auto* o_stride = simulate->add_option("--stride", sim.config.stride, "Record every n-th generation");
  auto* o_neg = simulate->add_option("--negative", sim.negative, "Negative raw abundance: clamp or resample");
  auto* o_target = simulate->add_option("--target", sim.target, "r_S value that ends the decay fit");

  FixtureArgs fx;
  auto* fixture = app.add_subcommand("fixture", "Write a synthetic input with a known answer");
  fixture->add_option("kind", fx.kind, "lognormal-sad, fisher-sad, neutral-panel or churn-panel")
      ->required()
      ->check(CLI::IsMember({"lognormal-sad", "fisher-sad", "neutral-panel", "churn-panel"}));
  fixture->add_option("--n", fx.n, "Sample size");
  fixture->add_option("--mu", fx.mu, "Log-normal mu");
  fixture->add_option("--sigma", fx.sigma, "Log-normal sigma");
  fixture->add_option("--c", fx.c, "Fisher c");
  fixture->add_option("--x-min", fx.x_min, "Fisher lower cutoff");
  fixture->add_option("--assets", fx.assets, "churn-panel: active assets per week");
  fixture->add_option("--churn", fx.churn, "churn-panel: assets replaced per week");
  fixture->add_option("--weeks", fx.weeks, "churn-panel: number of weeks");
  fixture->add_option("--N", fx.N, "neutral-panel: total abundance");
  fixture->add_option("--species", fx.species, "neutral-panel: species");
  fixture->add_option("--generations", fx.generations, "neutral-panel: generations");
  fixture->add_option("--start", fx.start, "First week (YYYY-MM-DD)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    Manifest m;
    m.seed = g.seed;
    OutputSet files;
    if (ingest->parsed()) {
      m.command = "ingest";
      m.inputs = {ingest_args.input};
      files = cmd_ingest(ingest_args, m.parameters);
    } else if (analyze->parsed()) {
      m.command = "analyze " + an.which;
      m.inputs = {an.panel};
      an.seed = g.seed;
      an.threads = g.threads;
      files = cmd_analyze(an, m.parameters);
    } else if (simulate->parsed()) {
      m.command = "simulate";
      SimulateArgs base;
      if (preset == "fig6") base.config = reference_preset();
      if (!config_path.empty()) {
        m.inputs.push_back(config_path);
        apply_config_file(config_path, base);
      }
      // command-line values override the file; the preset is the baseline
      if (*o_N) base.config.N = sim.config.N;
      if (*o_s) base.config.s = sim.config.s;
      if (*o_rho) base.config.rho = sim.config.rho;
      if (*o_sigma) base.config.sigma = sim.config.sigma;
      if (*o_b) base.config.b = sim.config.b;
      if (*o_gen) base.config.generations = sim.config.generations;
      if (*o_burn) base.config.burn_in = sim.config.burn_in;
      if (*o_stride) base.config.stride = sim.config.stride;
      if (*o_neg) base.negative = sim.negative;
      if (*o_target) base.target = sim.target;
      base.config.seed = g.seed;
      files = cmd_simulate(base, m.parameters, err);
      if (!preset.empty()) m.parameters["preset"] = preset;
    } else if (fixture->parsed()) {
      m.command = "fixture " + fx.kind;
      fx.seed = g.seed;
      files = cmd_fixture(fx, m.parameters);
    }
    if (g.timing) {
      m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    files.write(g.out_dir, m, g.force);
    for (const auto& n : files.names()) out << (std::filesystem::path(g.out_dir) / n).string() << '\n';
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace macroeco::cli
