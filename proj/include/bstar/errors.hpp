#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bstar {

enum class ErrorCode {
  InvalidProfile,
  GridMismatch,
  QuadratureUnstable,
  ZeroProfile,
  CollapsedToZero,
  NotConvergedInput,
  RescaleImpossible,
  EigensolverFailure,
  InsufficientSectors,
  NotRescaled,
  Coincide,
  NoCrossing,
  ParseError,
  ValidationError,
  FormatError,
  IoError,
};

std::string_view error_name(ErrorCode code);

// Every library failure is reported through this one exception type so that
// callers can switch on code() instead of catching a zoo of classes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::QuadratureUnstable: return "QuadratureUnstable";
    case ErrorCode::ZeroProfile: return "ZeroProfile";
    case ErrorCode::CollapsedToZero: return "CollapsedToZero";
    case ErrorCode::NotConvergedInput: return "NotConvergedInput";
    case ErrorCode::RescaleImpossible: return "RescaleImpossible";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::InsufficientSectors: return "InsufficientSectors";
    case ErrorCode::NotRescaled: return "NotRescaled";
    case ErrorCode::Coincide: return "Coincide";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace bstar
