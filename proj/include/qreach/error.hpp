#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qreach {

enum class ErrorKind {
  NotSymmetric,
  SingularSystem,
  NotPositiveDefinite,
  NonFinite,
  DimensionMismatch,
  DimensionTooLarge,
  EmptyBox,
  DegenerateRange,
  SingularShift,
  Unstable,
  AssumptionViolated,
  InfeasiblePair,
  NumeratorOutOfRange,
  InvalidUserP,
  HorizonCapExceeded,
  ParseError,
  Usage,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qreach
