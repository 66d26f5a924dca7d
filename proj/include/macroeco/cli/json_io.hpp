#pragma once

#include <cmath>
#include <string>

#include "macroeco/cli/output.hpp"
#include "macroeco/community.hpp"
#include "macroeco/date.hpp"
#include "macroeco/distributions/dist_fit.hpp"
#include "macroeco/distributions/turnover_law.hpp"
#include "macroeco/statcore/descriptive.hpp"
#include "macroeco/statcore/ks.hpp"

namespace macroeco::cli {

/// Finite numbers as-is, anything else as null.
inline Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json to_json(const DateInterval& d) { return {{"start", format_date(d.first)}, {"end", format_date(d.last)}}; }

inline Json to_json(const dist::DistFit& f) {
  Json params = Json::object();
  for (const auto& [k, v] : f.params) params[k] = num(v);
  return {{"family", f.family}, {"params", params}, {"loglik", num(f.loglik)}, {"n", f.n}};
}

inline Json to_json(const stats::KsResult& k) {
  return {{"statistic", num(k.statistic)},
          {"p_value", num(k.p_value)},
          {"n", k.n},
          {"method", k.method == stats::KsMethod::Asymptotic ? "asymptotic" : "bootstrap"}};
}

inline Json to_json(const stats::LinearFit& f) {
  return {{"slope", num(f.slope)}, {"intercept", num(f.intercept)}, {"r_squared", num(f.r_squared)}, {"n", f.n}};
}

inline Json to_json(const community::DecayFit& f) {
  Json j;
  j["linear"] = to_json(f.linear);
  j["linear"]["rmse"] = num(f.linear_rmse);
  if (f.exponential) {
    j["exponential"] = {{"amplitude", num(f.exponential->amplitude)},
                        {"rate", num(f.exponential->rate)},
                        {"r_squared", num(f.exponential->r_squared)},
                        {"n", f.exponential->n},
                        {"rmse", num(f.exponential_rmse)}};
  } else {
    j["exponential"] = nullptr;
  }
  j["winner"] = f.winner;
  return j;
}

inline Json to_json(const dist::StdFit& f) {
  return {{"A", num(f.A)}, {"B", num(f.B)}, {"loglik", num(f.loglik)}, {"n", f.n}, {"lags", f.lags}};
}

}  // namespace macroeco::cli
