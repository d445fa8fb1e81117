#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "gossip/potentials.hpp"
#include "gossip/random.hpp"
#include "gossip/rewards.hpp"
#include "gossip/simplex.hpp"

namespace gossip {

enum class StepMode {
  per_agent,   // one decision per agent, O(n) per round
  aggregate,   // multinomial/binomial over arm counts, O(m^2) per round
  mean_field,  // p <- conditional_next(p, g), the n -> infinity surrogate
};

std::string_view to_string(StepMode mode) noexcept;
/// Parses "per-agent", "aggregate", "mean-field"; "auto" picks by population size.
StepMode parse_step_mode(std::string_view text, std::int64_t n);
/// Aggregate above 10^4 agents, per-agent otherwise.
StepMode default_step_mode(std::int64_t n) noexcept;

/// Arm choices of all agents, either per agent, as counts, or (mean-field)
/// as a bare distribution.
class PopulationState {
 public:
  /// Agents 0..n-1 are laid out arm by arm following PopulationCounts::even_split.
  static PopulationState uniform(std::int64_t n, int m, StepMode mode);
  static PopulationState from_assignments(std::vector<std::int32_t> assignments, int m);
  static PopulationState from_counts(PopulationCounts counts);
  static PopulationState mean_field(ActionDistribution p);

  StepMode mode() const noexcept;
  int arms() const noexcept { return m_; }
  /// Number of agents; 0 for the mean-field surrogate.
  std::int64_t agents() const noexcept;

  /// Throws wrong-mode unless per-agent.
  std::span<const std::int32_t> assignments() const;
  /// Available for per-agent and aggregate states; throws wrong-mode for mean-field.
  PopulationCounts counts() const;
  ActionDistribution distribution() const;

 private:
  using Storage = std::variant<std::vector<std::int32_t>, PopulationCounts, ActionDistribution>;
  PopulationState(Storage storage, int m) : storage_(std::move(storage)), m_(m) {}

  Storage storage_;
  int m_;
};

/// One synchronous round with every agent deciding independently.
PopulationState step_per_agent(const PopulationState& state, const RewardVector& g,
                               const PotentialFamily& family, const RoundRng& rng);

/// The same round drawn directly on arm counts; equal in distribution to step_per_agent.
PopulationCounts step_aggregate(const PopulationCounts& counts, const RewardVector& g,
                                const PotentialFamily& family, const RoundRng& rng);

/// E[p' | p, g] with p'_j = p_j (1 + F_j(p, g)).
ActionDistribution conditional_next(const ActionDistribution& p, const RewardVector& g,
                                    const PotentialFamily& family);

/// Dispatches on the state's mode.
PopulationState step(const PopulationState& state, const RewardVector& g,
                     const PotentialFamily& family, const RoundRng& rng);

struct SimulationParams {
  std::int64_t n = 0;
  int m = 0;
  int T = 0;
  StepMode mode = StepMode::aggregate;
};

/// Per-round log of one run. p and p_hat hold T+1 entries (p_hat[0] = p[0]);
/// g and mu hold the T rewards and means drawn in rounds 0..T-1.
struct TrajectoryRecord {
  std::vector<ActionDistribution> p;
  std::vector<ActionDistribution> p_hat;
  std::vector<RewardVector> g;
  std::vector<MeanVector> mu;

  int rounds() const noexcept { return static_cast<int>(g.size()); }
  /// The first t rounds of this record.
  TrajectoryRecord prefix(int t) const;
};

/// Drives one seeded run round by round.
class Simulation {
 public:
  Simulation(SimulationParams params, const RewardModel& model, const PotentialFamily& family,
             std::uint64_t seed);

  int round() const noexcept { return t_; }
  const PopulationState& state() const noexcept { return state_; }
  const ActionDistribution& distribution() const noexcept { return p_; }

  struct Round {
    RewardDraw reward;
    ActionDistribution p_hat;
  };
  /// Draws round t's rewards against p^t, moves every agent, and returns what was drawn.
  Round advance();

 private:
  SimulationParams params_;
  const RewardModel& model_;
  PotentialFamily family_;
  std::uint64_t seed_;
  PopulationState state_;
  ActionDistribution p_;
  int t_ = 0;
};

void validate(const SimulationParams& params, const RewardModel& model);

TrajectoryRecord run_trajectory(const SimulationParams& params, const RewardModel& model,
                                const PotentialFamily& family, std::uint64_t seed);

}  // namespace gossip
