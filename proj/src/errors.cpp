#include "spdc/errors.hpp"

namespace spdc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::TailBoundFailure: return "TailBoundFailure";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EnergyMismatch: return "EnergyMismatch";
    case ErrorCode::DegenerateDispersion: return "DegenerateDispersion";
    case ErrorCode::NegativeH: return "NegativeH";
    case ErrorCode::UnequalWaists: return "UnequalWaists";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownMaterial: return "UnknownMaterial";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::UnknownMaterial:
    case ErrorCode::OutOfRange:
    case ErrorCode::UnequalWaists:
      return 2;
    case ErrorCode::NonConvergence:
    case ErrorCode::TailBoundFailure:
    case ErrorCode::EnergyMismatch:
    case ErrorCode::DegenerateDispersion:
    case ErrorCode::NegativeH:
      return 3;
    case ErrorCode::IoError:
      return 4;
  }
  return 1;
}

}  // namespace spdc
