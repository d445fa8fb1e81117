#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/simplex.hpp"

namespace gossip {

enum class FamilyKind {
  beta_adopt,
  disc_adopt,
  sigmoid_adopt,
  softmax_compare,
  two_neighbor_softmax,
};

/// One of the five local decision rules, seen through its induced zero-sum
/// potential family {F_j}.
///
/// Adoption rules move an agent to its sampled neighbor's arm k with
/// probability f(g_k). Comparison rules pick between the agent's own arm and
/// the sampled arm(s) with probability proportional to h(g) = exp(beta * g).
class PotentialFamily {
 public:
  /// f(g) = beta^g (1 - beta)^(1 - g) on binary rewards, beta in (0.5, 1).
  static PotentialFamily beta_adopt(double beta);
  /// f(g) = beta * g on rewards in [0, sigma], beta in (0, 1/sigma].
  static PotentialFamily disc_adopt(double beta, double sigma);
  /// f(g) = 1 / (1 + exp(-beta * g)), beta >= 0.
  static PotentialFamily sigmoid_adopt(double beta);
  /// Pairwise softmax comparison with h(g) = exp(beta * g), beta >= 0.
  static PotentialFamily softmax_compare(double beta);
  /// Three-way softmax choice among own arm and two sampled arms.
  static PotentialFamily two_neighbor_softmax(double beta);

  /// Parses "beta-adopt", "disc-adopt", "sigmoid-adopt", "softmax-compare",
  /// "two-neighbor-softmax".
  static PotentialFamily from_name(std::string_view name, double beta, double sigma = 1.0);

  FamilyKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  /// Support bound; only constrains disc-adopt.
  double sigma() const noexcept { return sigma_; }
  bool is_adoption() const noexcept;
  bool is_comparison() const noexcept { return !is_adoption(); }
  std::string_view name() const noexcept;

 private:
  PotentialFamily(FamilyKind kind, double beta, double sigma)
      : kind_(kind), beta_(beta), sigma_(sigma) {}

  FamilyKind kind_;
  double beta_;
  double sigma_;
};

/// f(g) for adoption families.
double adoption_prob(const PotentialFamily& family, double g);

/// Score h(g) = exp(beta * g) for comparison families.
double score(const PotentialFamily& family, double g);

struct ComparisonWeights {
  double own;
  double other;
};

/// Probabilities of keeping the own arm vs. switching to the sampled arm
/// under the pairwise softmax comparison.
ComparisonWeights comparison_weights(const PotentialFamily& family, double g_own, double g_other);

/// F_j(p, g) for every arm j.
std::vector<double> eval_potentials(const PotentialFamily& family, std::span<const double> p,
                                    std::span<const double> g);
std::vector<double> eval_potentials(const PotentialFamily& family, const ActionDistribution& p,
                                    const RewardVector& g);

/// sum_j p_j F_j(p, g); identically zero for every family.
double zero_sum_residual(const PotentialFamily& family, const ActionDistribution& p,
                         const RewardVector& g);

/// Constants (alpha1, alpha2, delta, L) under which a family satisfies the
/// correlation and Lipschitz assumption of the regret framework.
struct ParameterCertificate {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double delta = 0.0;
  double lipschitz_L = 0.0;
  bool valid = false;
  std::string validity_reason;
};

ParameterCertificate certificate(const PotentialFamily& family, double sigma);

/// Worst-case slacks of a two-sided linear bound checked on a grid.
/// A negative slack means the bound is violated at that point.
struct LinearizationReport {
  double lower_slack = 0.0;
  double upper_slack = 0.0;
  double worst_lower_x = 0.0;
  double worst_lower_y = 0.0;
  double worst_upper_x = 0.0;
  double worst_upper_y = 0.0;
  long points = 0;

  bool holds(double tolerance = 1e-12) const noexcept {
    return lower_slack >= -tolerance && upper_slack >= -tolerance;
  }
};

/// Checks (1/2 - 2b) b |x - y| <= |(e^{bx} - e^{by}) / (e^{bx} + e^{by})| <= (b/2) |x - y|
/// on a grid_points x grid_points grid over [-10, 10]^2. Requires 0 < beta <= 1/4.
LinearizationReport verify_exp_linearization(double beta, int grid_points);

/// Checks 1/2 + (b/4 - b^2) x <= sigmoid(b x) <= 1/2 + (b/4) x on [0, 10] and the
/// mirrored inequalities on [-10, 0), grid_points per half-interval.
/// Requires 0 < beta <= 1/4.
LinearizationReport verify_sigmoid_linearization(double beta, int grid_points);

}  // namespace gossip
