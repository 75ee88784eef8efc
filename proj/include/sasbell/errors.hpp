#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sasbell {

enum class ErrorKind {
  degenerate_input,
  unphysical_state,
  invalid_mixture,
  invalid_rates,
  insufficient_data,
  incomplete_settings,
  convergence_failure,
  config_error,
  data_error,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sasbell
