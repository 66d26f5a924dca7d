#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "macroeco/error.hpp"

namespace macroeco::stats {

struct SimplexOptions {
  double tol = 1e-8;            // stop once the simplex diameter falls below this
  std::size_t max_iterations = 20000;
  double initial_step = 0.1;    // relative step for nonzero coordinates
  double zero_step = 0.05;      // absolute step for zero coordinates
};

/// Derivative-free Nelder-Mead simplex descent. Deterministic given `start`.
template <typename F>
std::vector<double> minimize_nd(F&& f, std::vector<double> start, SimplexOptions opts = {}) {
  const std::size_t dim = start.size();
  if (dim == 0) return start;
  const double f0 = f(start);
  if (!std::isfinite(f0)) fail(Errc::NonFiniteObjective, "objective not finite at start");

  std::vector<std::vector<double>> pts(dim + 1, start);
  std::vector<double> vals(dim + 1, f0);
  for (std::size_t i = 0; i < dim; ++i) {
    auto& p = pts[i + 1];
    p[i] += p[i] != 0.0 ? opts.initial_step * std::fabs(p[i]) : opts.zero_step;
    vals[i + 1] = f(p);
  }
  // Non-finite trial values are treated as +inf so the simplex walks away.
  auto eval = [&](const std::vector<double>& p) {
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  for (auto& v : vals) {
    if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  std::vector<double> trial(dim);
  std::vector<double> trial2(dim);

  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) d = std::max(d, std::fabs(pts[i][k] - pts[0][k]));
    }
    return d;
  };

  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    {
      auto p2 = pts;
      auto v2 = vals;
      for (std::size_t i = 0; i <= dim; ++i) {
        pts[i] = std::move(p2[order[i]]);
        vals[i] = v2[order[i]];
      }
    }
    if (diameter() < opts.tol) return pts[0];

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k] / static_cast<double>(dim);
    }
    const auto& worst = pts[dim];
    for (std::size_t k = 0; k < dim; ++k) trial[k] = centroid[k] + (centroid[k] - worst[k]);
    const double fr = eval(trial);

    if (fr < vals[0]) {
      for (std::size_t k = 0; k < dim; ++k) trial2[k] = centroid[k] + 2.0 * (trial[k] - centroid[k]);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[dim] = trial2;
        vals[dim] = fe;
      } else {
        pts[dim] = trial;
        vals[dim] = fr;
      }
      continue;
    }
    if (fr < vals[dim - 1]) {
      pts[dim] = trial;
      vals[dim] = fr;
      continue;
    }
    // contraction, outside if the reflection improved on the worst point
    const bool outside = fr < vals[dim];
    for (std::size_t k = 0; k < dim; ++k) {
      trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                          : centroid[k] + 0.5 * (worst[k] - centroid[k]);
    }
    const double fc = eval(trial2);
    if (fc < (outside ? fr : vals[dim])) {
      pts[dim] = trial2;
      vals[dim] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
      vals[i] = eval(pts[i]);
    }
  }
  fail(Errc::MaxIterations, "minimize_nd did not converge");
}

struct Minimum1d {
  double x = 0.0;
  double value = 0.0;
};

/// Brent's method on [lo, hi].
template <typename F>
Minimum1d minimize_1d(F&& f, double lo, double hi, double tol = 1e-10,
                      std::size_t max_iterations = 500) {
  if (!(hi > lo)) fail(Errc::DegenerateRange, "minimize_1d: empty bracket");
  constexpr double golden = 0.3819660112501051;
  double a = lo;
  double b = hi;
  double x = a + golden * (b - a);
  double w = x;
  double v = x;
  double fx = f(x);
  if (!std::isfinite(fx)) fail(Errc::NonFiniteObjective, "minimize_1d: objective not finite");
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tol * std::fabs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) return {x, fx};
    bool golden_step = true;
    if (std::fabs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etemp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= xm ? a : b) - x;
      d = golden * e;
    }
    const double u = std::fabs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    double fu = f(u);
    if (!std::isfinite(fu)) fu = std::numeric_limits<double>::infinity();
    if (fu <= fx) {
      (u >= x ? a : b) = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  fail(Errc::MaxIterations, "minimize_1d did not converge");
}

}  // namespace macroeco::stats
