#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gossip {

enum class VerifyTier { quick, full };

VerifyTier parse_verify_tier(std::string_view text);

struct VerifyOptions {
  VerifyTier tier = VerifyTier::quick;
  std::uint64_t seed = 20240611;
  /// Mutation canary: negate F_0 inside the zero-sum and simplex checks.
  bool flip_potential_sign = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst measured value of the checked quantity (residual, drift, z-score, slack).
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

CheckResult check_zero_sum(const VerifyOptions& opts);
CheckResult check_simplex_invariance(const VerifyOptions& opts);
CheckResult check_linearization(const VerifyOptions& opts);
CheckResult check_certificate_bracket(const VerifyOptions& opts);
CheckResult check_mode_equivalence(const VerifyOptions& opts);
CheckResult check_one_step_mean(const VerifyOptions& opts);

std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace gossip
