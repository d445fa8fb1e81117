#pragma once

#include <cstdint>
#include <vector>

#include "gossip/population.hpp"

namespace gossip {

/// q'_j = q_j (1 + F_j(q, g)). The result is not renormalized; a coordinate
/// that would go below zero by rounding is floored at exactly 0.
ActionDistribution mwu_step(const ActionDistribution& q, const RewardVector& g,
                            const PotentialFamily& family);

/// A population run together with the zero-sum MWU process driven by the
/// same rewards. q is reset to the population's p at every round d*tau.
struct CoupledTrajectory {
  TrajectoryRecord run;
  /// q[t] for t = 0..T as produced by the MWU recursion, before any reset at t.
  std::vector<ActionDistribution> q;
  /// l1[t] = ||p^t - q[t]||_1.
  std::vector<double> l1;
  int tau = 0;
};

CoupledTrajectory run_coupled(const SimulationParams& params, const RewardModel& model,
                              const PotentialFamily& family, int tau, std::uint64_t seed);

}  // namespace gossip
