#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "macroeco/community.hpp"
#include "macroeco/error.hpp"
#include "macroeco/ingest.hpp"
#include "macroeco/statcore/random.hpp"

namespace macroeco::neutral {

enum class NegativeRaw {
  Clamp,     // negative numerators become 0
  Resample,  // redraw the noise until the numerator is non-negative
};

struct SimConfig {
  double N = 1e7;
  std::size_t s = 1500;
  double rho = 3.5;
  double sigma = 4.47213595499958;  // sqrt(20)
  double b = 1.0;
  std::size_t generations = 10000;  // recorded generations after burn-in
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
  std::size_t stride = 1;  // record every stride-th generation
  NegativeRaw negative = NegativeRaw::Clamp;
  std::vector<double> initial;           // default: N / s each
  std::vector<std::uint64_t> stream_ids;  // default: species index
};

inline SimConfig reference_config() { return {}; }

inline void validate(const SimConfig& c) {
  if (!(c.N > 0.0) || !std::isfinite(c.N)) fail(Errc::InvalidArgument, "N must be positive");
  if (c.s < 2) fail(Errc::InvalidArgument, "need at least two species");
  if (!(c.sigma > 0.0)) fail(Errc::InvalidArgument, "sigma must be positive");
  if (!(c.b > 0.0)) fail(Errc::InvalidArgument, "b must be positive");
  if (!std::isfinite(c.rho)) fail(Errc::InvalidArgument, "rho must be finite");
  if (c.stride == 0) fail(Errc::InvalidArgument, "stride must be positive");
  if (!c.initial.empty()) {
    if (c.initial.size() != c.s) fail(Errc::LengthMismatch, "initial state must have s entries");
    for (double v : c.initial) {
      if (!(v >= 0.0) || !std::isfinite(v)) fail(Errc::InvalidArgument, "initial abundances must be >= 0");
    }
  }
  if (!c.stream_ids.empty() && c.stream_ids.size() != c.s) {
    fail(Errc::LengthMismatch, "stream_ids must have s entries");
  }
}

/// Sum that does not depend on the order of the terms: every term is cut to
/// a grid fixed by the largest magnitude and accumulated in 128-bit integers.
inline double order_free_sum(std::span<const double> v) {
  __extension__ using int128 = __int128;
  double top = 0.0;
  for (double x : v) top = std::max(top, std::fabs(x));
  if (top == 0.0 || !std::isfinite(top)) return top == 0.0 ? 0.0 : top;
  int e = 0;
  std::frexp(top, &e);
  const int shift = 100 - e;
  int128 acc = 0;
  for (double x : v) acc += static_cast<int128>(std::ldexp(x, shift));
  return std::ldexp(static_cast<double>(acc), -shift);
}

enum class EventKind { Extinction, Speciation };

inline const char* to_string(EventKind k) { return k == EventKind::Extinction ? "extinction" : "speciation"; }

struct Event {
  std::size_t generation = 0;  // generation whose state the event leads to
  std::size_t species = 0;
  EventKind kind = EventKind::Extinction;
  bool realized = false;  // abundance actually reached 0 / left 0

  friend bool operator==(const Event&, const Event&) = default;
};

struct SimState {
  std::vector<double> x;
  std::vector<stats::RandomSource> noise;
  std::size_t generation = 0;
};

inline SimState initial_state(const SimConfig& cfg) {
  validate(cfg);
  SimState st;
  st.x = cfg.initial.empty() ? std::vector<double>(cfg.s, cfg.N / static_cast<double>(cfg.s)) : cfg.initial;
  st.noise.reserve(cfg.s);
  for (std::size_t i = 0; i < cfg.s; ++i) {
    st.noise.emplace_back(cfg.seed, cfg.stream_ids.empty() ? i : cfg.stream_ids[i]);
  }
  return st;
}

/// Advances one generation. Events are appended when `events` is non-null.
inline void step(SimState& st, const SimConfig& cfg, std::vector<Event>* events, std::vector<double>& raw) {
  const std::size_t s = st.x.size();
  raw.resize(s);
  const std::size_t next = st.generation + 1;
  const std::size_t first_event = events ? events->size() : 0;
  for (std::size_t i = 0; i < s; ++i) {
    const double x = st.x[i];
    const double scale = cfg.sigma * std::sqrt(x);
    double g = cfg.rho * x + scale * st.noise[i].normal();
    if (cfg.negative == NegativeRaw::Resample) {
      for (int tries = 0; g + cfg.b < 0.0 && tries < 1000; ++tries) g = cfg.rho * x + scale * st.noise[i].normal();
    }
    const double r = g + cfg.b;
    raw[i] = r > 0.0 ? r : 0.0;
    if (events) {
      if (x > 0.0 && g <= 0.0) events->push_back({next, i, EventKind::Extinction, false});
      if (x == 0.0 && r > 0.0) events->push_back({next, i, EventKind::Speciation, false});
    }
  }
  const double total = order_free_sum(raw);
  if (!(total > 0.0)) {
    fail(Errc::AllZeroDenominator, "every species numerator is zero at generation " + std::to_string(next));
  }
  const double factor = cfg.N / total;
  for (std::size_t i = 0; i < s; ++i) st.x[i] = raw[i] * factor;
  st.generation = next;
  if (events) {
    for (std::size_t k = first_event; k < events->size(); ++k) {
      auto& e = (*events)[k];
      e.realized = e.kind == EventKind::Extinction ? st.x[e.species] == 0.0 : st.x[e.species] > 0.0;
    }
  }
}

inline void step(SimState& st, const SimConfig& cfg, std::vector<Event>* events = nullptr) {
  std::vector<double> raw;
  step(st, cfg, events, raw);
}

struct SimRun {
  SimConfig config;
  std::vector<std::size_t> generations;  // generation of each recorded row
  std::vector<std::vector<double>> trajectory;
  std::vector<Event> events;  // after burn-in only
  double max_sum_error = 0.0;  // max |sum x - N| / N over every simulated generation
};

inline double relative_sum_error(std::span<const double> x, double N) {
  return std::fabs(order_free_sum(x) - N) / N;
}

inline SimRun run(const SimConfig& cfg) {
  auto st = initial_state(cfg);
  SimRun out;
  out.config = cfg;
  std::vector<double> raw;
  for (std::size_t g = 0; g < cfg.burn_in; ++g) {
    step(st, cfg, nullptr, raw);
    out.max_sum_error = std::max(out.max_sum_error, relative_sum_error(st.x, cfg.N));
  }
  auto record = [&] {
    out.generations.push_back(st.generation);
    out.trajectory.push_back(st.x);
  };
  record();
  for (std::size_t g = 1; g <= cfg.generations; ++g) {
    step(st, cfg, &out.events, raw);
    out.max_sum_error = std::max(out.max_sum_error, relative_sum_error(st.x, cfg.N));
    if (g % cfg.stride == 0) record();
  }
  return out;
}

/// Abundances of one recorded row, keeping species with at least
/// `min_abundance` individuals.
inline std::vector<double> abundance_sample(const SimRun& r, std::size_t row, double min_abundance = 1.0) {
  if (row >= r.trajectory.size()) fail(Errc::InvalidArgument, "row out of range");
  std::vector<double> out;
  for (double x : r.trajectory[row]) {
    if (x > 0.0 && x >= min_abundance) out.push_back(x);
  }
  return out;
}

/// r_S between the first recorded row and every later one (lag unit =
/// stride generations) with both decay fits.
struct ModelDecay {
  community::SimilaritySeries series;
  community::DecayFit fit;
  std::size_t generations = 0;  // simulated after burn-in
};

inline ModelDecay model_rs_decay(const SimRun& r, std::optional<double> target = 0.2) {
  if (r.trajectory.size() < community::kMinDecayLags) fail(Errc::TooFewLags, "run has too few recorded rows");
  ModelDecay out;
  out.series.lag_step = r.config.stride;
  out.series.r_s = community::similarity_profile(r.trajectory, community::Universe::Union, &out.series.universe);
  for (std::size_t k = 0; k < out.series.r_s.size(); ++k) out.series.lags.push_back(static_cast<double>(k));
  if (target) {
    const auto it = std::find_if(out.series.r_s.begin(), out.series.r_s.end(), [&](double v) { return v < *target; });
    if (it == out.series.r_s.end()) fail(Errc::TargetNotReached, "r_S never fell below the target");
    const auto keep = static_cast<std::size_t>(it - out.series.r_s.begin()) + 1;
    out.series.r_s.resize(keep);
    out.series.lags.resize(keep);
  }
  out.generations = r.generations.empty() ? 0 : r.generations.back() - r.generations.front();
  out.fit = community::decay_model_selection(out.series);
  return out;
}

/// Simulates until r_S relative to the post-burn-in state falls below
/// `target`, checking every stride generations, then fits the decay.
inline ModelDecay run_until_target(const SimConfig& cfg, double target, std::size_t max_generations) {
  auto st = initial_state(cfg);
  std::vector<double> raw;
  for (std::size_t g = 0; g < cfg.burn_in; ++g) step(st, cfg, nullptr, raw);
  std::vector<std::vector<double>> rows{st.x};
  ModelDecay out;
  out.series.lag_step = cfg.stride;
  std::size_t done = 0;
  while (true) {
    for (std::size_t k = 0; k < cfg.stride; ++k) step(st, cfg, nullptr, raw);
    done += cfg.stride;
    rows.push_back(st.x);
    const std::vector<std::vector<double>> pair{rows.front(), rows.back()};
    const double r_s = community::similarity_profile(pair, community::Universe::Union)[1];
    if (r_s < target && rows.size() > community::kMinDecayLags) break;
    if (done >= max_generations) fail(Errc::TargetNotReached, "r_S did not fall below the target in time");
  }
  out.series.r_s = community::similarity_profile(rows, community::Universe::Union, &out.series.universe);
  for (std::size_t k = 0; k < rows.size(); ++k) out.series.lags.push_back(static_cast<double>(k));
  out.generations = done;
  out.fit = community::decay_model_selection(out.series);
  return out;
}

inline std::string species_id(std::size_t i, std::size_t s) {
  const std::size_t digits = std::max<std::size_t>(4, std::to_string(s).size());
  std::string n = std::to_string(i + 1);
  return "sp" + std::string(digits > n.size() ? digits - n.size() : 0, '0') + n;
}

/// Recorded rows as a weekly panel starting at `start` (one week per row).
inline ingest::MarketPanel to_panel(const SimRun& r, Date start = make_date(2014, 11, 2)) {
  const std::size_t s = r.config.s;
  std::vector<Date> weeks;
  std::vector<double> cap;
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    weeks.push_back(start + std::chrono::days{7 * static_cast<long>(k)});
    cap.insert(cap.end(), r.trajectory[k].begin(), r.trajectory[k].end());
  }
  std::vector<ingest::Asset> assets;
  for (std::size_t i = 0; i < s; ++i) assets.push_back({species_id(i, s), "species " + std::to_string(i + 1)});
  return ingest::MarketPanel(std::move(weeks), std::move(assets), std::move(cap));
}

inline void write_events(std::ostream& out, const SimRun& r) {
  out << "generation,species,kind,realized\n";
  for (const auto& e : r.events) {
    out << e.generation << ',' << species_id(e.species, r.config.s) << ',' << to_string(e.kind) << ','
        << (e.realized ? 1 : 0) << '\n';
  }
}

/// Model parameters whose stationary abundance distribution has Gamma shape
/// `shape` (shape ~ 2 b rho / sigma^2 in the large-N limit).
inline SimConfig config_for_gamma_shape(double shape, SimConfig base = {}) {
  if (!(shape > 0.0)) fail(Errc::DomainError, "shape must be positive");
  base.sigma = std::sqrt(2.0 * base.b * base.rho / shape);
  return base;
}

}  // namespace macroeco::neutral
