#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace congru {

enum class ErrorCode {
  // dvr_core / lattice
  NonIntegralEntry,
  DimensionMismatch,
  NotADirectSum,
  DegenerateLattice,
  TorsionQuotient,
  RankMismatch,
  // poly_engine
  DegreeBoundExceeded,
  ParseError,
  // augmented_algebra / fp_module
  AugmentationNotWellDefined,
  NonLocalAugmentation,
  InconsistentCodim,
  NotFiniteOverBase,
  // resolution
  StrategyInapplicable,
  VerificationFailed,
  ResolutionTooShort,
  // congruence
  KappaNotInjective,
  InSymbolicSquare,
  NotInAugmentationIdeal,
  ZeroDivisorSuspected,
  ProductLiftFailed,
  NotASurjection,
  NotAMorphism,
  NotSameCodim,
  InternalInvariantViolation,
  // generic
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace congru
