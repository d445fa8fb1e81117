#include "gossip/population.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gossip/error.hpp"

namespace gossip {

namespace {

void require_dims(int m, const RewardVector& g) {
  if (g.size() != m) {
    throw Error(ErrorKind::invalid_dimension, "population has " + std::to_string(m) +
                                                  " arms but reward vector has " +
                                                  std::to_string(g.size()));
  }
}

// Probability that an agent on arm `own` that sampled arm `other` ends on `other`.
double switch_prob(const PotentialFamily& family, const RewardVector& g, std::size_t own,
                   std::size_t other) {
  if (family.is_adoption()) return adoption_prob(family, g[other]);
  return comparison_weights(family, g[own], g[other]).other;
}

// Three-way softmax over (own, b, c); scores are shifted by their maximum.
std::array<double, 3> three_way(const PotentialFamily& family, double g_own, double g_b,
                                double g_c) {
  const double beta = family.beta();
  const double top = std::max({beta * g_own, beta * g_b, beta * g_c});
  std::array<double, 3> w{std::exp(beta * g_own - top), std::exp(beta * g_b - top),
                          std::exp(beta * g_c - top)};
  const double total = w[0] + w[1] + w[2];
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

std::string_view to_string(StepMode mode) noexcept {
  switch (mode) {
    case StepMode::per_agent:
      return "per-agent";
    case StepMode::aggregate:
      return "aggregate";
    case StepMode::mean_field:
      return "mean-field";
  }
  return "unknown";
}

StepMode default_step_mode(std::int64_t n) noexcept {
  return n > 10000 ? StepMode::aggregate : StepMode::per_agent;
}

StepMode parse_step_mode(std::string_view text, std::int64_t n) {
  if (text == "auto") return default_step_mode(n);
  if (text == "per-agent") return StepMode::per_agent;
  if (text == "aggregate") return StepMode::aggregate;
  if (text == "mean-field") return StepMode::mean_field;
  throw Error(ErrorKind::invalid_parameter, "unknown step mode '" + std::string(text) + "'");
}

PopulationState PopulationState::uniform(std::int64_t n, int m, StepMode mode) {
  if (mode == StepMode::mean_field) return mean_field(ActionDistribution::uniform(m));
  auto counts = PopulationCounts::even_split(n, m);
  if (mode == StepMode::aggregate) return from_counts(std::move(counts));
  std::vector<std::int32_t> assignments;
  assignments.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < m; ++j) {
    assignments.insert(assignments.end(), static_cast<std::size_t>(counts[j]), j);
  }
  return from_assignments(std::move(assignments), m);
}

PopulationState PopulationState::from_assignments(std::vector<std::int32_t> assignments, int m) {
  if (m < 2) throw Error(ErrorKind::invalid_dimension, "need at least 2 arms");
  if (assignments.empty()) throw Error(ErrorKind::invalid_population, "population has no agents");
  for (auto a : assignments) {
    if (a < 0 || a >= m) {
      throw Error(ErrorKind::invalid_population, "assignment " + std::to_string(a) +
                                                     " outside [0, " + std::to_string(m) + ")");
    }
  }
  return PopulationState(std::move(assignments), m);
}

PopulationState PopulationState::from_counts(PopulationCounts counts) {
  if (counts.size() < 2) throw Error(ErrorKind::invalid_dimension, "need at least 2 arms");
  const int m = counts.size();
  return PopulationState(std::move(counts), m);
}

PopulationState PopulationState::mean_field(ActionDistribution p) {
  const int m = p.size();
  return PopulationState(std::move(p), m);
}

StepMode PopulationState::mode() const noexcept {
  switch (storage_.index()) {
    case 0:
      return StepMode::per_agent;
    case 1:
      return StepMode::aggregate;
    default:
      return StepMode::mean_field;
  }
}

std::int64_t PopulationState::agents() const noexcept {
  if (const auto* a = std::get_if<std::vector<std::int32_t>>(&storage_)) {
    return static_cast<std::int64_t>(a->size());
  }
  if (const auto* c = std::get_if<PopulationCounts>(&storage_)) return c->total();
  return 0;
}

std::span<const std::int32_t> PopulationState::assignments() const {
  const auto* a = std::get_if<std::vector<std::int32_t>>(&storage_);
  if (a == nullptr) {
    throw Error(ErrorKind::wrong_mode, "assignments requested from a " +
                                           std::string(to_string(mode())) + " state");
  }
  return *a;
}

PopulationCounts PopulationState::counts() const {
  if (const auto* c = std::get_if<PopulationCounts>(&storage_)) return *c;
  if (const auto* a = std::get_if<std::vector<std::int32_t>>(&storage_)) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(m_), 0);
    for (auto arm : *a) ++counts[static_cast<std::size_t>(arm)];
    return PopulationCounts(std::move(counts));
  }
  throw Error(ErrorKind::wrong_mode, "a mean-field state has no agent counts");
}

ActionDistribution PopulationState::distribution() const {
  if (const auto* p = std::get_if<ActionDistribution>(&storage_)) return *p;
  return distribution_from_counts(counts());
}

PopulationState step_per_agent(const PopulationState& state, const RewardVector& g,
                               const PotentialFamily& family, const RoundRng& rng) {
  if (state.mode() != StepMode::per_agent) {
    throw Error(ErrorKind::wrong_mode, "step_per_agent needs a per-agent state");
  }
  require_dims(state.arms(), g);
  const auto before = state.assignments();
  const auto n = static_cast<std::int64_t>(before.size());

  Engine neighbors = rng.stream(StreamPurpose::neighbor_sampling);
  Engine coins = rng.stream(StreamPurpose::adoption_coins);
  std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::int32_t> after(before.begin(), before.end());
  const bool two_neighbor = family.kind() == FamilyKind::two_neighbor_softmax;
  for (std::size_t u = 0; u < after.size(); ++u) {
    const auto own = before[u];
    const auto b = before[static_cast<std::size_t>(pick(neighbors))];
    if (two_neighbor) {
      const auto c = before[static_cast<std::size_t>(pick(neighbors))];
      const auto w = three_way(family, g[own], g[b], g[c]);
      const double x = unit(coins);
      after[u] = x < w[0] ? own : (x < w[0] + w[1] ? b : c);
    } else {
      const double x = unit(coins);
      if (b != own && x < switch_prob(family, g, own, b)) after[u] = b;
    }
  }
  return PopulationState::from_assignments(std::move(after), state.arms());
}

PopulationCounts step_aggregate(const PopulationCounts& counts, const RewardVector& g,
                                const PotentialFamily& family, const RoundRng& rng) {
  const int m = counts.size();
  require_dims(m, g);
  const auto n = counts.total();
  const auto mm = static_cast<std::size_t>(m);

  Engine neighbors = rng.stream(StreamPurpose::neighbor_sampling);
  Engine coins = rng.stream(StreamPurpose::adoption_coins);

  std::vector<double> weights(mm);
  for (std::size_t k = 0; k < mm; ++k) weights[k] = static_cast<double>(counts[k]);

  std::vector<std::int64_t> next(mm, 0);
  if (family.kind() != FamilyKind::two_neighbor_softmax) {
    for (std::size_t j = 0; j < mm; ++j) {
      if (counts[j] == 0) continue;
      const auto sampled = sample_multinomial(neighbors, counts[j], weights);
      std::int64_t stay = counts[j];
      for (std::size_t k = 0; k < mm; ++k) {
        if (k == j || sampled[k] == 0) continue;
        const auto moved = sample_binomial(coins, sampled[k], switch_prob(family, g, j, k));
        next[k] += moved;
        stay -= moved;
      }
      next[j] += stay;
    }
  } else {
    // Ordered neighbor pairs (b, c) are drawn with probability n_b n_c / n^2.
    std::vector<double> pair_weights(mm * mm);
    for (std::size_t b = 0; b < mm; ++b) {
      for (std::size_t c = 0; c < mm; ++c) pair_weights[b * mm + c] = weights[b] * weights[c];
    }
    for (std::size_t j = 0; j < mm; ++j) {
      if (counts[j] == 0) continue;
      const auto sampled = sample_multinomial(neighbors, counts[j], pair_weights);
      for (std::size_t idx = 0; idx < sampled.size(); ++idx) {
        if (sampled[idx] == 0) continue;
        const std::size_t b = idx / mm;
        const std::size_t c = idx % mm;
        const auto w = three_way(family, g[j], g[b], g[c]);
        const auto split = sample_multinomial(coins, sampled[idx], w);
        next[j] += split[0];
        next[b] += split[1];
        next[c] += split[2];
      }
    }
  }

  std::int64_t total = 0;
  for (auto c : next) total += c;
  if (total != n) {
    throw Error(ErrorKind::invalid_population, "aggregate step changed the population from " +
                                                   std::to_string(n) + " to " +
                                                   std::to_string(total));
  }
  return PopulationCounts(std::move(next));
}

ActionDistribution conditional_next(const ActionDistribution& p, const RewardVector& g,
                                    const PotentialFamily& family) {
  const auto F = eval_potentials(family, p.masses(), g.values());
  std::vector<double> next(F.size());
  for (std::size_t j = 0; j < F.size(); ++j) next[j] = std::max(0.0, p[j] * (1.0 + F[j]));
  return ActionDistribution(std::move(next));
}

PopulationState step(const PopulationState& state, const RewardVector& g,
                     const PotentialFamily& family, const RoundRng& rng) {
  switch (state.mode()) {
    case StepMode::per_agent:
      return step_per_agent(state, g, family, rng);
    case StepMode::aggregate:
      return PopulationState::from_counts(step_aggregate(state.counts(), g, family, rng));
    case StepMode::mean_field:
      return PopulationState::mean_field(conditional_next(state.distribution(), g, family));
  }
  throw Error(ErrorKind::wrong_mode, "unknown step mode");
}

TrajectoryRecord TrajectoryRecord::prefix(int t) const {
  if (t < 0 || t > rounds()) {
    throw Error(ErrorKind::invalid_input, "prefix of " + std::to_string(t) + " rounds from a " +
                                              std::to_string(rounds()) + "-round record");
  }
  const auto k = static_cast<std::ptrdiff_t>(t);
  TrajectoryRecord out;
  out.p.assign(p.begin(), p.begin() + k + 1);
  out.p_hat.assign(p_hat.begin(), p_hat.begin() + k + 1);
  out.g.assign(g.begin(), g.begin() + k);
  out.mu.assign(mu.begin(), mu.begin() + k);
  return out;
}

void validate(const SimulationParams& params, const RewardModel& model) {
  if (params.m < 2) throw Error(ErrorKind::invalid_dimension, "need at least 2 arms");
  if (params.n < 1) throw Error(ErrorKind::invalid_population, "need at least one agent");
  if (params.T < 0) throw Error(ErrorKind::invalid_parameter, "T must be non-negative");
  if (params.mode == StepMode::per_agent && params.n > INT32_MAX) {
    throw Error(ErrorKind::invalid_population, "per-agent mode supports at most 2^31-1 agents");
  }
  if (model.arms() != params.m) {
    throw Error(ErrorKind::invalid_dimension, "reward model has " +
                                                  std::to_string(model.arms()) + " arms, run has " +
                                                  std::to_string(params.m));
  }
}

Simulation::Simulation(SimulationParams params, const RewardModel& model,
                       const PotentialFamily& family, std::uint64_t seed)
    : params_(params),
      model_(model),
      family_(family),
      seed_(seed),
      state_(PopulationState::uniform(params.n, params.m, params.mode)),
      p_(state_.distribution()) {
  validate(params_, model_);
}

Simulation::Round Simulation::advance() {
  const RoundRng rng(seed_, static_cast<std::uint64_t>(t_));
  Engine reward_stream = rng.stream(StreamPurpose::reward_draws);
  RewardDraw draw = model_.next(t_, p_, reward_stream);
  auto p_hat = conditional_next(p_, draw.g, family_);
  state_ = step(state_, draw.g, family_, rng);
  p_ = state_.distribution();
  ++t_;
  return Round{std::move(draw), std::move(p_hat)};
}

TrajectoryRecord run_trajectory(const SimulationParams& params, const RewardModel& model,
                                const PotentialFamily& family, std::uint64_t seed) {
  Simulation sim(params, model, family, seed);
  TrajectoryRecord rec;
  const auto T = static_cast<std::size_t>(params.T);
  rec.p.reserve(T + 1);
  rec.p_hat.reserve(T + 1);
  rec.g.reserve(T);
  rec.mu.reserve(T);
  rec.p.push_back(sim.distribution());
  rec.p_hat.push_back(sim.distribution());
  for (int t = 0; t < params.T; ++t) {
    auto round = sim.advance();
    rec.g.push_back(std::move(round.reward.g));
    rec.mu.push_back(std::move(round.reward.mu));
    rec.p_hat.push_back(std::move(round.p_hat));
    rec.p.push_back(sim.distribution());
  }
  return rec;
}

}  // namespace gossip
