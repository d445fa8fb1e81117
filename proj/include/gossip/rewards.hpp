#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "gossip/random.hpp"
#include "gossip/simplex.hpp"

namespace gossip {

/// f(p) = sum_j a_j p_j^2 + sum_j b_j p_j + c, restricted to the simplex.
struct ConvexFunctionSpec {
  std::vector<double> quadratic;  // a_j >= 0
  std::vector<double> linear;     // b_j
  double constant = 0.0;

  /// f(p) = 3/5 p1^2 + 3/10 p2^2 - 5/6 p1 + 1/15 p3 + 44/15 on the 3-simplex,
  /// minimized at (3/4, 1/9, 5/36).
  static ConvexFunctionSpec benchmark();

  int size() const noexcept { return static_cast<int>(quadratic.size()); }
  /// Throws invalid-parameter on mismatched lengths or a negative quadratic coefficient.
  void validate() const;
};

double eval_convex(const ConvexFunctionSpec& fn, const ActionDistribution& p);
std::vector<double> gradient(const ConvexFunctionSpec& fn, const ActionDistribution& p);
/// sup over the simplex of ||grad f||_inf = max_j max(|b_j|, |2 a_j + b_j|).
double gradient_bound(const ConvexFunctionSpec& fn);

/// Bernoulli rewards in {0, 1} with P(1) = mu_j.
struct StationaryBernoulli {
  MeanVector means;
};

/// Two-point rewards in {0, sigma} with P(sigma) = mu_j / sigma.
struct StationaryScaledBernoulli {
  MeanVector means;
  double sigma;
};

/// Scheduled means in [-1, 1] plus uniform noise on [-halfwidth, halfwidth],
/// clipped to [-sigma, sigma]. With leader_punishing set the schedule is
/// ignored: the currently most-adopted arm gets mean -1 and every other arm +1.
struct AdversarialScript {
  std::vector<MeanVector> schedule;
  double noise_halfwidth = 0.0;
  double sigma = 1.0;
  bool leader_punishing = false;
  int arms = 0;
};

/// g = -grad f(p) / G + b with b ~ N(0, noise_sd^2) per coordinate, then
/// clipped to [-clip, clip].
struct GradientOracle {
  ConvexFunctionSpec fn;
  double G;
  double noise_sd;
  double clip;
};

struct RewardDraw {
  RewardVector g;
  MeanVector mu;
};

/// Per-round generator of the shared reward vector and its nominal mean.
class RewardModel {
 public:
  using Variant =
      std::variant<StationaryBernoulli, StationaryScaledBernoulli, AdversarialScript, GradientOracle>;

  static RewardModel stationary_bernoulli(MeanVector means);
  static RewardModel scaled_bernoulli(MeanVector means, double sigma);
  static RewardModel adversarial(std::vector<MeanVector> schedule, double noise_halfwidth,
                                 double sigma = 1.0);
  static RewardModel leader_punishing(int arms, double noise_halfwidth = 0.0, double sigma = 1.0);
  static RewardModel gradient_oracle(ConvexFunctionSpec fn, double G, double noise_sd,
                                     double clip);

  int arms() const noexcept { return arms_; }
  /// Declared support bound sigma of the generated rewards.
  double support() const noexcept { return support_; }
  bool stationary() const noexcept;
  const Variant& variant() const noexcept { return model_; }

  /// Draws round t. p is read only by adaptive models (gradient oracle,
  /// leader-punishing script).
  RewardDraw next(int t, const ActionDistribution& p, Engine& stream) const;

 private:
  RewardModel(Variant model, int arms, double support)
      : model_(std::move(model)), arms_(arms), support_(support) {}

  Variant model_;
  int arms_;
  double support_;
};

RewardDraw next_reward(const RewardModel& model, int t, const ActionDistribution& p,
                       Engine& stream);

/// Evenly spaced means from hi down to lo (inclusive).
MeanVector evenly_spaced_means(int m, double hi, double lo);

}  // namespace gossip
