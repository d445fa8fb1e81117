#include "gossip/error.hpp"

namespace gossip {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::invalid_population: return "invalid-population";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_reward: return "invalid-reward";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_epoching: return "invalid-epoching";
    case ErrorKind::wrong_family: return "wrong-family";
    case ErrorKind::wrong_mode: return "wrong-mode";
    case ErrorKind::schedule_exhausted: return "schedule-exhausted";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace gossip
