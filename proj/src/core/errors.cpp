#include "core/errors.hpp"

namespace hsl {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonIntegrableWeight: return "NonIntegrableWeight";
    case ErrorCode::TailNotConverged: return "TailNotConverged";
    case ErrorCode::InsufficientDerivatives: return "InsufficientDerivatives";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::DerivativeOrderLost: return "DerivativeOrderLost";
    case ErrorCode::NoTrace: return "NoTrace";
    case ErrorCode::QuadratureDiverged: return "QuadratureDiverged";
    case ErrorCode::SectorViolation: return "SectorViolation";
    case ErrorCode::FitRejected: return "FitRejected";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::AliasWarning: return "AliasWarning";
    case ErrorCode::UnboundedSymbol: return "UnboundedSymbol";
    case ErrorCode::ContourNotConverged: return "ContourNotConverged";
    case ErrorCode::SymbolUnboundedOnContour: return "SymbolUnboundedOnContour";
    case ErrorCode::TimeStepNotConverged: return "TimeStepNotConverged";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::MissingCriterion: return "MissingCriterion";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace hsl
