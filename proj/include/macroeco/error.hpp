#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace macroeco {

enum class Errc {
  MalformedRow,
  DuplicateKey,
  NonUniformGrid,
  EmptyPanel,
  BadOrdering,
  ZeroVariance,
  LengthMismatch,
  DomainError,
  TooFewSamples,
  NonFiniteObjective,
  MaxIterations,
  NonPositiveSample,
  SigmaZero,
  FitDiverged,
  EmptyPeriod,
  DegenerateRange,
  TooFewLags,
  AllZeroDenominator,
  TargetNotReached,
  EmptySelection,
  SeriesTooShort,
  InvalidArgument,
  Io,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::NonUniformGrid: return "NonUniformGrid";
    case Errc::EmptyPanel: return "EmptyPanel";
    case Errc::BadOrdering: return "BadOrdering";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DomainError: return "DomainError";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::NonFiniteObjective: return "NonFiniteObjective";
    case Errc::MaxIterations: return "MaxIterations";
    case Errc::NonPositiveSample: return "NonPositiveSample";
    case Errc::SigmaZero: return "SigmaZero";
    case Errc::FitDiverged: return "FitDiverged";
    case Errc::EmptyPeriod: return "EmptyPeriod";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::TooFewLags: return "TooFewLags";
    case Errc::AllZeroDenominator: return "AllZeroDenominator";
    case Errc::TargetNotReached: return "TargetNotReached";
    case Errc::EmptySelection: return "EmptySelection";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the `Errc` codes so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace macroeco
