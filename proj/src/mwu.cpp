#include "gossip/mwu.hpp"

#include <algorithm>
#include <string>

#include "gossip/error.hpp"

namespace gossip {

ActionDistribution mwu_step(const ActionDistribution& q, const RewardVector& g,
                            const PotentialFamily& family) {
  const auto F = eval_potentials(family, q.masses(), g.values());
  std::vector<double> next(F.size());
  for (std::size_t j = 0; j < F.size(); ++j) next[j] = std::max(0.0, q[j] * (1.0 + F[j]));
  return ActionDistribution(std::move(next));
}

CoupledTrajectory run_coupled(const SimulationParams& params, const RewardModel& model,
                              const PotentialFamily& family, int tau, std::uint64_t seed) {
  if (tau < 1) throw Error(ErrorKind::invalid_epoching, "epoch length must be at least 1");
  if (params.T % tau != 0) {
    throw Error(ErrorKind::invalid_epoching, "T=" + std::to_string(params.T) +
                                                 " is not a multiple of tau=" +
                                                 std::to_string(tau));
  }

  Simulation sim(params, model, family, seed);
  CoupledTrajectory out;
  out.tau = tau;
  auto& rec = out.run;
  rec.p.push_back(sim.distribution());
  rec.p_hat.push_back(sim.distribution());
  out.q.push_back(sim.distribution());
  out.l1.push_back(0.0);

  for (int t = 0; t < params.T; ++t) {
    // Snap before this round's rewards are drawn.
    const ActionDistribution& q_start = (t % tau == 0) ? rec.p.back() : out.q.back();
    auto round = sim.advance();
    auto q_next = mwu_step(q_start, round.reward.g, family);

    rec.g.push_back(std::move(round.reward.g));
    rec.mu.push_back(std::move(round.reward.mu));
    rec.p_hat.push_back(std::move(round.p_hat));
    rec.p.push_back(sim.distribution());
    out.l1.push_back(l1_distance(rec.p.back(), q_next));
    out.q.push_back(std::move(q_next));
  }
  return out;
}

}  // namespace gossip
