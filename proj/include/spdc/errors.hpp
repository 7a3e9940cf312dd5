#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spdc {

enum class ErrorCode {
  NonConvergence,
  TailBoundFailure,
  OutOfRange,
  EnergyMismatch,
  DegenerateDispersion,
  NegativeH,
  UnequalWaists,
  ParseError,
  ValidationError,
  UnknownMaterial,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Process exit status associated with an error class:
// 2 validation, 3 numerical, 4 I/O.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spdc
