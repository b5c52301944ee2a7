#include "freqlab/error.hpp"

namespace freqlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::NeverOccurred: return "NeverOccurred";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::ZeroLowerProbability: return "ZeroLowerProbability";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::NotPiSystem: return "NotPiSystem";
    case ErrorCode::ClosureBudgetExceeded: return "ClosureBudgetExceeded";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace freqlab
