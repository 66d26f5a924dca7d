#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "macroeco/sad.hpp"
#include "support.hpp"

using namespace macroeco;
using namespace macroeco::sad;
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

SadSample sample_of(std::vector<double> v) {
  SadSample s;
  s.n = v.size();
  s.values = std::move(v);
  return s;
}

stats::Histogram with_counts(std::vector<std::uint64_t> counts) {
  stats::Histogram h;
  h.edges = stats::uniform_edges(0.0, 1.0, counts.size());
  h.counts = std::move(counts);
  return h;
}

}  // namespace

TEST_CASE("market shares normalize per week", "[sad]") {
  const auto p = panel_of({{1, 3}});
  const auto s = build_sad(p, {kStart, kStart}, Aggregation::PerWeek);
  REQUIRE(s.n == 2);
  CHECK(s.values[0] == 0.25);
  CHECK(s.values[1] == 0.75);

  RandomSource rng(3);
  std::vector<std::vector<double>> caps(10, std::vector<double>(40));
  for (auto& row : caps) {
    for (double& v : row) v = rng.uniform() < 0.2 ? 0.0 : std::exp(rng.normal(12.0, 4.0));
  }
  const auto big = panel_of(caps);
  for (std::size_t w = 0; w < big.num_weeks(); ++w) {
    double sum = 0.0;
    for (double x : market_shares(big, w)) sum += x;
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("period aggregation", "[sad]") {
  const auto p = panel_of({{1, 1, 0}, {3, 1, 0}, {1, 0, 0}, {0, 0, 1}});
  const DateInterval first3{kStart, kStart + std::chrono::days{14}};
  const auto mean = build_sad(p, first3);
  REQUIRE(mean.n == 2);
  CHECK(mean.values[0] == Catch::Approx((0.5 + 0.75 + 1.0) / 3.0));
  CHECK(mean.values[1] == Catch::Approx((0.5 + 0.25) / 2.0));
  CHECK(build_sad(p, first3, Aggregation::PerWeek).n == 5);
  CHECK(code_of([&] {
          build_sad(p, {kStart + std::chrono::days{70}, kStart + std::chrono::days{80}});
        }) == Errc::EmptyPeriod);
}

TEST_CASE("mode classification on explicit histograms", "[sad][mode]") {
  CHECK(classify_mode(with_counts({9, 7, 5, 3, 1})) == ModeShape::Monotone);
  CHECK(classify_mode(with_counts({1, 3, 5, 7, 9})) == ModeShape::Monotone);
  CHECK(classify_mode(with_counts({1, 3, 9, 7, 1})) == ModeShape::InteriorMode);
  CHECK(classify_mode(with_counts({5, 6, 5, 5, 5, 4})) == ModeShape::InteriorMode);
  RandomSource rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::uint64_t> c(3 + rng.bounded(10));
    for (auto& v : c) v = rng.bounded(1000);
    auto sorted = c;
    std::sort(sorted.rbegin(), sorted.rend());
    CHECK(classify_mode(with_counts(sorted)) == ModeShape::Monotone);
    const auto peak = 1 + rng.bounded(c.size() - 2);
    c[peak] = 5000;
    CHECK(classify_mode(with_counts(c)) == ModeShape::InteriorMode);
  }
}

TEST_CASE("log-binned histogram keeps every value", "[sad][mode]") {
  RandomSource rng(5);
  const auto xs = dist::lognormal_sample(rng, {-9.0, 2.3}, 5000);
  const auto h = log_binned_histogram(xs);
  CHECK(h.total() == xs.size());
  CHECK(h.bins() >= 3);
  CHECK(h.counts.front() >= 10);
  CHECK(h.counts.back() >= 10);
  double mass = 0.0;
  const auto heights = h.heights();
  for (std::size_t b = 0; b < h.bins(); ++b) mass += heights[b] * h.width(b);
  CHECK(mass == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("log-normal sample is recognized", "[sad][fit]") {
  RandomSource rng(20240101);
  const auto r = fit_and_test(sample_of(dist::lognormal_sample(rng, {-9.0, 2.3}, 10000)));
  CHECK(r.verdict == "lognormal");
  CHECK(r.ks_lognormal.p_value > 0.05);
  CHECK(r.fisher.loglik < r.lognormal.loglik);
  CHECK(r.mode == ModeShape::InteriorMode);
  CHECK(r.lognormal.param("mu") == Catch::Approx(-9.0).epsilon(0.02));
}

TEST_CASE("Fisher sample is recognized", "[sad][fit]") {
  RandomSource rng(77);
  const auto r = fit_and_test(sample_of(dist::fisher_sample(rng, {1.0, 1e-4}, 10000)));
  CHECK(r.verdict == "fisher");
  CHECK(r.mode == ModeShape::Monotone);
  CHECK(r.ks_fisher.p_value > 0.01);
}

TEST_CASE("verdict is invariant under rescaling", "[sad][property]") {
  RandomSource rng(9);
  for (int rep = 0; rep < 6; ++rep) {
    auto xs = rep % 2 ? dist::fisher_sample(rng, {2.0, 1e-3}, 400)
                      : dist::lognormal_sample(rng, {-3.0, 1.5}, 400);
    const auto base = fit_and_test(sample_of(xs));
    for (double k : {1e-3, 7.5, 1e4}) {
      auto scaled = xs;
      for (double& x : scaled) x *= k;
      const auto r = fit_and_test(sample_of(scaled));
      CHECK(r.verdict == base.verdict);
      const double shift = static_cast<double>(xs.size()) * std::log(k);
      CHECK(r.lognormal.loglik == Catch::Approx(base.lognormal.loglik - shift).epsilon(1e-9));
      CHECK(r.fisher.loglik == Catch::Approx(base.fisher.loglik - shift).epsilon(1e-6));
      CHECK(r.mode == base.mode);
    }
  }
}

TEST_CASE("bootstrap KS option", "[sad][fit]") {
  RandomSource rng(4);
  FitOptions opt;
  opt.bootstrap_replicates = 100;
  opt.seed = 12;
  const auto r = fit_and_test(sample_of(dist::lognormal_sample(rng, {0.0, 1.0}, 300)), opt);
  CHECK(r.ks_lognormal.method == stats::KsMethod::Bootstrap);
  CHECK(r.ks_lognormal.p_value > 0.05);
  CHECK(r.ks_fisher.p_value < 0.05);
}

TEST_CASE("fit_and_test needs enough values", "[sad][errors]") {
  CHECK(code_of([] { fit_and_test(sample_of(std::vector<double>(29, 0.1))); }) ==
        Errc::TooFewSamples);
}
