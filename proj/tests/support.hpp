#pragma once

#include <functional>

#include "catch_amalgamated.hpp"
#include "macroeco/error.hpp"

namespace testing {

inline macroeco::Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const macroeco::Error& e) {
    return e.code();
  }
  FAIL("expected macroeco::Error");
  return macroeco::Errc::Io;
}

}  // namespace testing
