#pragma once
#include <stdexcept>
#include <string>

namespace hsl {

// Numeric values are part of the C ABI (see include/hslab/hslab.h).
enum class ErrorCode : int {
  NonIntegrableWeight = 1,
  TailNotConverged = 2,
  InsufficientDerivatives = 3,
  HypothesisViolated = 4,
  DerivativeOrderLost = 5,
  NoTrace = 6,
  QuadratureDiverged = 7,
  SectorViolation = 8,
  FitRejected = 9,
  BranchCut = 10,
  AliasWarning = 11,
  UnboundedSymbol = 12,
  ContourNotConverged = 13,
  SymbolUnboundedOnContour = 14,
  TimeStepNotConverged = 15,
  ConfigInvalid = 16,
  MissingCriterion = 17,
  InvalidArgument = 18,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& msg)
      : std::runtime_error(std::string(error_name(c)) + ": " + msg), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

}  // namespace hsl
