#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gossip {

using Engine = std::mt19937_64;

enum class StreamPurpose : std::uint64_t {
  neighbor_sampling = 1,
  adoption_coins = 2,
  reward_draws = 3,
};

/// Source of per-round random substreams.
///
/// Every substream is a fresh engine fully determined by
/// (master seed, round, purpose), so draws for different purposes never
/// interleave and a round can be replayed in isolation.
class RoundRng {
 public:
  RoundRng(std::uint64_t seed, std::uint64_t round) : seed_(seed), round_(round) {}

  Engine stream(StreamPurpose purpose) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t round() const noexcept { return round_; }

 private:
  std::uint64_t seed_;
  std::uint64_t round_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Binomial(trials, p); p is clamped to [0, 1].
std::int64_t sample_binomial(Engine& engine, std::int64_t trials, double p);

/// Multinomial(trials, weights) by sequential conditional binomials.
/// Weights need not be normalized but must be non-negative with positive sum.
std::vector<std::int64_t> sample_multinomial(Engine& engine, std::int64_t trials,
                                             std::span<const double> weights);

}  // namespace gossip
