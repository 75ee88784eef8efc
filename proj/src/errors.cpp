#include "sasbell/errors.hpp"

namespace sasbell {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_input: return "DegenerateInput";
    case ErrorKind::unphysical_state: return "UnphysicalState";
    case ErrorKind::invalid_mixture: return "InvalidMixture";
    case ErrorKind::invalid_rates: return "InvalidRates";
    case ErrorKind::insufficient_data: return "InsufficientData";
    case ErrorKind::incomplete_settings: return "IncompleteSettings";
    case ErrorKind::convergence_failure: return "ConvergenceFailure";
    case ErrorKind::config_error: return "ConfigError";
    case ErrorKind::data_error: return "DataError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace sasbell
