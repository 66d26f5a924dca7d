#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace macroeco::dist {

/// Serializable summary of a fitted family: name, parameters, log-likelihood.
struct DistFit {
  std::string family;
  std::vector<std::pair<std::string, double>> params;
  double loglik = 0.0;
  std::size_t n = 0;

  double param(const std::string& key) const {
    for (const auto& [k, v] : params) {
      if (k == key) return v;
    }
    return 0.0;
  }
};

}  // namespace macroeco::dist
