#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "macroeco/error.hpp"
#include "macroeco/statcore/descriptive.hpp"

namespace macroeco::stats {

struct Histogram {
  std::vector<double> edges;          // B + 1 strictly increasing
  std::vector<std::uint64_t> counts;  // B
  bool density_mode = false;

  std::size_t bins() const { return counts.size(); }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }

  double width(std::size_t b) const { return edges[b + 1] - edges[b]; }
  double center(std::size_t b) const { return 0.5 * (edges[b] + edges[b + 1]); }

  /// Bin heights: raw counts, or count / (total * width) in density mode.
  std::vector<double> heights() const {
    std::vector<double> h(bins(), 0.0);
    const auto n = static_cast<double>(total());
    for (std::size_t b = 0; b < bins(); ++b) {
      h[b] = density_mode ? (n > 0 ? static_cast<double>(counts[b]) / (n * width(b)) : 0.0)
                          : static_cast<double>(counts[b]);
    }
    return h;
  }
};

inline std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) fail(Errc::DegenerateRange, "uniform_edges: empty range");
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  edges.back() = hi;
  return edges;
}

/// Bins `sample` on `edges`; the right-most edge is inclusive, values outside
/// [edges.front(), edges.back()] are dropped.
inline Histogram make_histogram(std::span<const double> sample, std::vector<double> edges,
                                bool density_mode) {
  if (edges.size() < 2) fail(Errc::InvalidArgument, "histogram needs at least one bin");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) fail(Errc::InvalidArgument, "histogram edges not increasing");
  }
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  h.density_mode = density_mode;
  for (double v : sample) {
    if (!(v >= edges.front()) || !(v <= edges.back())) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto b = static_cast<std::size_t>(it - edges.begin());
    b = b == 0 ? 0 : b - 1;
    if (b >= h.counts.size()) b = h.counts.size() - 1;
    ++h.counts[b];
  }
  h.edges = std::move(edges);
  return h;
}

/// Doane's rule: 1 + log2(n) + log2(1 + |g1| / sigma_g1), never below `min_bins`.
inline std::size_t doane_bins(std::span<const double> sample, std::size_t min_bins = 1) {
  const auto n = static_cast<double>(sample.size());
  if (sample.size() < 3) return std::max<std::size_t>(min_bins, 1);
  const double g1 = skewness(sample);
  const double sigma_g1 = std::sqrt(6.0 * (n - 2.0) / ((n + 1.0) * (n + 3.0)));
  const double k = 1.0 + std::log2(n) + std::log2(1.0 + std::fabs(g1) / sigma_g1);
  return std::max(min_bins, static_cast<std::size_t>(std::ceil(k)));
}

}  // namespace macroeco::stats
