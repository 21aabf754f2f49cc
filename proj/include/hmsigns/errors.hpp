#pragma once

#include <stdexcept>
#include <string>

namespace hmsigns {

enum class ErrorCode {
  NotSquarefree,
  UnsupportedField,
  EvenCharacteristic,
  NotIntegral,
  NotTotallyPositive,
  CutoffMismatch,
  FieldMismatch,
  NotNormalized,
  BadPrime,
  HasseBoundViolated,
  MissingPrime,
  EmptySample,
  BadReduction,
  ParseError,
  NetworkError,
  ValidationError,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit status) can branch on the kind, not the text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hmsigns
