#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gossip {

enum class ErrorKind {
  invalid_dimension,
  invalid_population,
  invalid_parameter,
  invalid_reward,
  invalid_input,
  invalid_epoching,
  wrong_family,
  wrong_mode,
  schedule_exhausted,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-checkable error category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gossip
