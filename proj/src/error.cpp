#include "pdpt/error.hpp"

namespace pdpt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::input_error: return "INPUT_ERROR";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    case ErrorCode::structure_error: return "STRUCTURE_ERROR";
    case ErrorCode::config_error: return "CONFIG_ERROR";
    case ErrorCode::cyclic_transfer: return "CYCLIC_TRANSFER";
    case ErrorCode::no_feasible_insertion: return "NO_FEASIBLE_INSERTION";
    case ErrorCode::insufficient_fleet: return "INSUFFICIENT_FLEET";
    case ErrorCode::domain_error: return "DOMAIN_ERROR";
    case ErrorCode::selection_error: return "SELECTION_ERROR";
    case ErrorCode::ga_no_feasible: return "GA_NO_FEASIBLE";
    case ErrorCode::too_large: return "TOO_LARGE";
    case ErrorCode::no_feasible: return "NO_FEASIBLE";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace pdpt
