#pragma once

#include <stdexcept>
#include <string>

namespace freqlab {

// Numeric values are part of the C API (see freqlab.h) and must stay stable.
enum class ErrorCode : int {
  InvalidArgument = 1,
  InvalidPoint = 2,
  DimensionMismatch = 3,
  DegeneratePair = 4,
  ZeroMass = 5,
  OutOfRange = 6,
  EmptyWindow = 7,
  NeverOccurred = 8,
  EmptySelection = 9,
  ZeroLowerProbability = 10,
  NoBracket = 11,
  NotPiSystem = 12,
  ClosureBudgetExceeded = 13,
  Overflow = 14,
  BudgetExceeded = 15,
  Io = 16,
  Parse = 17,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace freqlab
