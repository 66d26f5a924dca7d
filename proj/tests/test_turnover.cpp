#include <cmath>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"
#include "macroeco/turnover.hpp"
#include "support.hpp"

using namespace macroeco;
using namespace macroeco::turnover;
using macroeco::stats::RandomSource;
using testing::code_of;

namespace {

const Date kStart = make_date(2014, 11, 2);

ingest::MarketPanel panel_of(const std::vector<std::vector<double>>& caps) {
  std::vector<ingest::SnapshotRow> rows;
  for (std::size_t w = 0; w < caps.size(); ++w) {
    for (std::size_t a = 0; a < caps[w].size(); ++a) {
      rows.push_back({kStart + std::chrono::days{7 * static_cast<long>(w)}, "a" + std::to_string(a), "",
                      caps[w][a]});
    }
  }
  return ingest::load_panel(rows);
}

std::vector<std::vector<double>> random_caps(std::uint64_t seed, std::size_t weeks, std::size_t assets) {
  RandomSource rng(seed);
  std::vector<std::vector<double>> caps(weeks, std::vector<double>(assets));
  for (auto& row : caps) {
    for (double& v : row) v = rng.uniform() < 0.3 ? 0.0 : std::exp(rng.normal(5.0, 2.0));
  }
  caps[0][0] = 1.0;
  caps.back()[0] = 1.0;
  return caps;
}

DateInterval all_weeks(const ingest::MarketPanel& p) { return {p.weeks().front(), p.weeks().back()}; }

}  // namespace

TEST_CASE("ratios of constant and doubling shares", "[turnover]") {
  SECTION("constant share") {
    const auto p = panel_of({{1, 3}, {2, 6}, {4, 12}});
    const std::vector<std::size_t> lags{1, 2};
    const auto s = collect_ratios(p, all_weeks(p), lags);
    REQUIRE(s.size() == 2);
    CHECK(s[0].ratios.size() == 4);
    CHECK(s[1].ratios.size() == 2);
    for (const auto& t : s) {
      for (double l : t.ratios) CHECK(l == Catch::Approx(1.0));
    }
  }
  SECTION("doubling share") {
    const auto p = panel_of({{1, 7}, {2, 6}});
    const std::vector<std::size_t> lags{1};
    const auto s = collect_ratios(p, all_weeks(p), lags);
    CHECK(s[0].ratios[0] == Catch::Approx(2.0));
    CHECK(std::log(s[0].ratios[0]) == Catch::Approx(std::numbers::ln2));
  }
  CHECK(default_lags() == std::vector<std::size_t>{1, 2, 4, 8, 16, 32});
}

TEST_CASE("ratio count matches a brute-force pair count", "[turnover][property]") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto caps = random_caps(seed, 40, 12);
    const auto p = panel_of(caps);
    const DateInterval base{p.weeks()[5], p.weeks()[20]};
    const auto samples = collect_ratios(p, base);
    for (const auto& s : samples) {
      std::size_t expected = 0;
      for (std::size_t t0 = 5; t0 <= 20; ++t0) {
        if (t0 + s.lag >= p.num_weeks()) continue;
        for (std::size_t a = 0; a < p.num_assets(); ++a) {
          expected += (p.present(t0, a) && p.present(t0 + s.lag, a)) ? 1 : 0;
        }
      }
      CHECK(s.ratios.size() == expected);
    }
    CollectOptions thin;
    thin.thinned = true;
    const auto thinned = collect_ratios(p, base, default_lags(), thin);
    for (std::size_t i = 0; i < thinned.size(); ++i) CHECK(thinned[i].ratios.size() <= samples[i].ratios.size());
  }
}

TEST_CASE("ratios are scale free", "[turnover][property]") {
  auto caps = random_caps(3, 30, 10);
  const auto p = panel_of(caps);
  for (auto& row : caps) {
    for (double& v : row) v *= 123.5;
  }
  const auto q = panel_of(caps);
  CollectOptions raw;
  raw.raw_cap = true;
  for (const auto& opt : {CollectOptions{}, raw}) {
    const auto a = collect_ratios(p, all_weeks(p), default_lags(), opt);
    const auto b = collect_ratios(q, all_weeks(q), default_lags(), opt);
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a[i].ratios.size() == b[i].ratios.size());
      for (std::size_t k = 0; k < a[i].ratios.size(); ++k) {
        CHECK(a[i].ratios[k] == Catch::Approx(b[i].ratios[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("report on sampled turnover law", "[turnover][fit]") {
  RandomSource rng(2024);
  const dist::StdParams truth{1.0, 0.6, 1.0};
  TurnoverSample s{1, dist::std_sample(rng, truth, 100000), {}};
  const auto rep = std_report(std::span(&s, 1));
  REQUIRE(rep.lags.size() == 1);
  const auto& lr = rep.lags[0];
  REQUIRE(lr.fit.has_value());
  CHECK(lr.fit->A == Catch::Approx(1.0).epsilon(0.10));
  CHECK(lr.fit->B == Catch::Approx(0.6).epsilon(0.10));
  CHECK(std::fabs(lr.asymmetry) < 0.01);
  double mass = 0.0;
  const auto h = lr.histogram.heights();
  for (std::size_t b = 0; b < h.size(); ++b) mass += h[b] * lr.histogram.width(b);
  CHECK(mass == Catch::Approx(1.0).margin(1e-12));
  for (std::size_t b = 0; b < lr.histogram.bins(); ++b) {
    CHECK(lr.histogram.width(b) == Catch::Approx(0.25));
  }
  CHECK(lr.fitted_density().size() == lr.histogram.bins());
  CHECK(implied_sad(*lr.fit).shape == lr.fit->A);
}

TEST_CASE("degenerate ratios are flagged", "[turnover][fit]") {
  TurnoverSample s{1, std::vector<double>(100, 1.0), {}};
  const auto rep = std_report(std::span(&s, 1));
  CHECK_FALSE(rep.lags[0].fit.has_value());
  CHECK_FALSE(rep.lags[0].fit_error.empty());
  CHECK(rep.lags[0].asymmetry == 0.0);
  TurnoverSample small{1, std::vector<double>(49, 1.5), {}};
  CHECK(code_of([&] { std_report(std::span(&small, 1)); }) == Errc::TooFewSamples);
}
