#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "macroeco/codependence.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace macroeco;
using namespace macroeco::codependence;
using macroeco::stats::RandomSource;
using testing::code_of;

namespace {

const Date kStart = make_date(2014, 11, 2);

Date week(std::size_t w) { return kStart + std::chrono::days{7 * static_cast<long>(w)}; }

ingest::MarketPanel panel_of(const std::vector<std::vector<double>>& caps) {
  std::vector<ingest::SnapshotRow> rows;
  for (std::size_t w = 0; w < caps.size(); ++w) {
    for (std::size_t a = 0; a < caps[w].size(); ++a) {
      char id[16];
      std::snprintf(id, sizeof id, "c%03zu", a);
      rows.push_back({week(w), id, "", caps[w][a]});
    }
  }
  return ingest::load_panel(rows);
}

/// Capitalization paths driven by i.i.d. normal log-variations.
std::vector<std::vector<double>> white_noise_caps(std::uint64_t seed, std::size_t assets, std::size_t weeks) {
  RandomSource rng(seed);
  std::vector<std::vector<double>> caps(weeks + 1, std::vector<double>(assets));
  for (std::size_t a = 0; a < assets; ++a) {
    double level = rng.normal(15.0, 2.0);
    caps[0][a] = std::exp(level);
    for (std::size_t w = 1; w <= weeks; ++w) {
      level += rng.normal(0.0, 0.1);
      caps[w][a] = std::exp(level);
    }
  }
  return caps;
}

DateInterval all_weeks(const ingest::MarketPanel& p) { return {p.weeks().front(), p.weeks().back()}; }

}  // namespace

TEST_CASE("persistent selection", "[codependence]") {
  std::vector<std::vector<double>> caps(6, std::vector<double>{1, 1, 1, 1, 1});
  caps[2][0] = 0;
  caps[0][2] = 0;
  caps[5][3] = 0;
  const auto p = panel_of(caps);
  CHECK(select_persistent(p, {week(1), week(4)}) == std::vector<std::size_t>{1, 2, 3, 4});
  CHECK(select_persistent(p, all_weeks(p)) == std::vector<std::size_t>{1, 4});
  CHECK(select_persistent(p, {week(0), week(0)}) == std::vector<std::size_t>{0, 1, 3, 4});
  std::vector<std::vector<double>> sparse{{1, 0}, {0, 1}};
  CHECK(code_of([&] {
          const auto q = panel_of(sparse);
          select_persistent(q, all_weeks(q));
        }) == Errc::EmptySelection);
}

TEST_CASE("variation series", "[codependence]") {
  const auto p = panel_of({{1, 5}, {2, 0}, {4, 5}, {2, 10}});
  const auto v = variation_series(p, 0, all_weeks(p));
  REQUIRE(v.values.size() == 3);
  CHECK(v.values[0] == Catch::Approx(std::log(2.0)));
  CHECK(v.values[2] == Catch::Approx(-std::log(2.0)));
  CHECK(variation_series(p, 1, all_weeks(p)).values.size() == 1);
}

TEST_CASE("matrix structure", "[codependence][matrix]") {
  auto caps = white_noise_caps(3, 12, 60);
  for (std::size_t w = 0; w < caps.size(); ++w) caps[w][5] = 3.0 * caps[w][2];  // identical V, larger cap
  const auto p = panel_of(caps);
  const auto subset = select_persistent(p, all_weeks(p));
  CorrelationOptions opt;
  opt.top_k = 4;
  opt.n_null = 3;
  const auto rep = correlation_matrix(p, subset, all_weeks(p), opt);
  const std::size_t n = rep.matrix.size();
  REQUIRE(n == 12);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(rep.matrix[i][i] == 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(rep.matrix[i][j] == rep.matrix[j][i]);
      CHECK(std::fabs(rep.matrix[i][j]) <= 1.0);
    }
  }
  for (std::size_t i = 1; i < n; ++i) CHECK(rep.total_cap[i - 1] <= rep.total_cap[i]);
  const auto pos = [&](std::size_t asset) {
    return static_cast<std::size_t>(std::find(rep.order.begin(), rep.order.end(), asset) - rep.order.begin());
  };
  CHECK(rep.matrix[pos(2)][pos(5)] == Catch::Approx(1.0).margin(1e-12));
  const auto v0 = variation_series(p, 0, all_weeks(p)).values;
  const auto v1 = variation_series(p, 1, all_weeks(p)).values;
  CHECK(rep.matrix[pos(0)][pos(1)] == Catch::Approx(oracle::pearson(v0, v1)).margin(1e-12));
  CHECK(rep.null_values.size() == 3 * 66);
  CHECK(rep.top_k_off_diagonal().size() == 6);
}

TEST_CASE("matrix ignores scale and input order", "[codependence][property]") {
  auto caps = white_noise_caps(5, 8, 40);
  const auto p = panel_of(caps);
  for (auto& row : caps) row[3] *= 1000.0;
  const auto q = panel_of(caps);
  const auto subset = select_persistent(p, all_weeks(p));
  std::vector<std::size_t> reversed(subset.rbegin(), subset.rend());
  const auto a = correlation_matrix(p, subset, all_weeks(p));
  const auto b = correlation_matrix(p, reversed, all_weeks(p));
  CHECK(a.matrix == b.matrix);
  CHECK(a.null_values == b.null_values);
  const auto c = correlation_matrix(q, subset, all_weeks(q));
  for (std::size_t i = 0; i < a.order.size(); ++i) {
    for (std::size_t j = 0; j < a.order.size(); ++j) {
      const auto ci = std::find(c.order.begin(), c.order.end(), a.order[i]) - c.order.begin();
      const auto cj = std::find(c.order.begin(), c.order.end(), a.order[j]) - c.order.begin();
      CHECK(c.matrix[ci][cj] == Catch::Approx(a.matrix[i][j]).margin(1e-12));
    }
  }
}

TEST_CASE("constant series are excluded", "[codependence][matrix]") {
  auto caps = white_noise_caps(6, 4, 30);
  for (auto& row : caps) row[1] = 7.0;
  const auto p = panel_of(caps);
  const auto subset = select_persistent(p, all_weeks(p));
  const auto rep = correlation_matrix(p, subset, all_weeks(p));
  CHECK(rep.matrix.size() == 3);
  CHECK(rep.excluded == std::vector<std::string>{"c001"});
  for (auto& row : caps) row[0] = row[2] = row[3] = 7.0;
  const auto flat = panel_of(caps);
  CHECK(code_of([&] { correlation_matrix(flat, subset, all_weeks(flat)); }) == Errc::ZeroVariance);
}

TEST_CASE("white-noise correlations sit inside the null band", "[codependence][null]") {
  const auto p = panel_of(white_noise_caps(11, 60, 160));
  const auto subset = select_persistent(p, all_weeks(p));
  CorrelationOptions opt;
  opt.n_null = 2;
  opt.seed = 4;
  const auto rep = correlation_matrix(p, subset, all_weeks(p), opt);
  CHECK(rep.fraction_inside_null() >= 0.96);
  CHECK(std::fabs(rep.null.mean) <= 3.0 * rep.null.standard_error);
  const double band = 2.33 / std::sqrt(159.0);
  CHECK(rep.null.p99 == Catch::Approx(band).epsilon(0.15));
  CHECK(rep.null.p01 == Catch::Approx(-band).epsilon(0.15));

  AutocorrelationOptions ao;
  ao.seed = 4;
  const auto ac = autocorrelation(p, subset, all_weeks(p), ao);
  CHECK(ac.rows.size() == 60);
  CHECK(ac.null_values.size() == 600);
  CHECK(ac.fraction_inside_null() >= 0.9);
}

TEST_CASE("alternating series is perfectly anticorrelated", "[codependence][auto]") {
  std::vector<std::vector<double>> caps;
  for (std::size_t w = 0; w < 20; ++w) caps.push_back({w % 2 ? std::exp(1.0) : 1.0, std::exp(0.1 * w * w)});
  const auto p = panel_of(caps);
  const std::vector<std::size_t> subset{0, 1};
  const auto ac = autocorrelation(p, subset, all_weeks(p));
  const auto it = std::find_if(ac.rows.begin(), ac.rows.end(), [](const AutocorrelationRow& r) { return r.asset == 0; });
  REQUIRE(it != ac.rows.end());
  CHECK(it->r_a == Catch::Approx(-1.0).margin(1e-12));
  AutocorrelationOptions far;
  far.tau = 17;
  CHECK(code_of([&] { autocorrelation(p, subset, all_weeks(p), far); }) == Errc::SeriesTooShort);
}
