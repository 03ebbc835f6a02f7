#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdpt {

enum class ErrorCode {
  input_error,
  parse_error,
  structure_error,
  config_error,
  cyclic_transfer,
  no_feasible_insertion,
  insufficient_fleet,
  domain_error,
  selection_error,
  ga_no_feasible,
  too_large,
  no_feasible,
};

std::string_view to_string(ErrorCode code);

// Every failure the library raises on purpose carries one of the codes above;
// callers (the CLI in particular) map codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pdpt
