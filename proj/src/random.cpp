#include "gossip/random.hpp"

#include <algorithm>
#include <numeric>

#include "gossip/error.hpp"

namespace gossip {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Engine RoundRng::stream(StreamPurpose purpose) const {
  const std::uint64_t a = mix64(seed_);
  const std::uint64_t b = mix64(a ^ mix64(round_ + 0x632BE59BD9B4E019ULL));
  const std::uint64_t c = mix64(b ^ static_cast<std::uint64_t>(purpose));
  std::seed_seq seq{static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Engine(seq);
}

std::int64_t sample_binomial(Engine& engine, std::int64_t trials, double p) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(trials, p);
  return dist(engine);
}

std::vector<std::int64_t> sample_multinomial(Engine& engine, std::int64_t trials,
                                             std::span<const double> weights) {
  if (weights.empty()) throw Error(ErrorKind::invalid_dimension, "multinomial with no outcomes");
  double remaining_weight = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw Error(ErrorKind::invalid_parameter, "negative multinomial weight");
    remaining_weight += w;
  }
  if (!(remaining_weight > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "multinomial weights have no positive mass");
  }

  // suffix[i] = sum of weights[i..]
  std::vector<double> suffix(weights.size() + 1, 0.0);
  for (std::size_t i = weights.size(); i-- > 0;) suffix[i] = suffix[i + 1] + weights[i];

  std::vector<std::int64_t> out(weights.size(), 0);
  std::int64_t left = trials;
  // The last positive weight takes whatever is left.
  std::size_t last = weights.size() - 1;
  while (weights[last] == 0.0) --last;
  for (std::size_t i = 0; i < last && left > 0; ++i) {
    if (weights[i] > 0.0) {
      out[i] = sample_binomial(engine, left, weights[i] / suffix[i]);
      left -= out[i];
    }
  }
  out[last] += left;
  return out;
}

}  // namespace gossip
