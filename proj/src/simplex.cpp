#include "gossip/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gossip/error.hpp"

namespace gossip {

namespace {

void require_dimension(std::size_t m) {
  if (m < 2) {
    throw Error(ErrorKind::invalid_dimension,
                "need at least 2 arms, got " + std::to_string(m));
  }
}

}  // namespace

ActionDistribution::ActionDistribution(std::vector<double> masses) : masses_(std::move(masses)) {
  require_dimension(masses_.size());
  double sum = 0.0;
  for (double x : masses_) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::invalid_input, "negative or non-finite mass " + std::to_string(x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw Error(ErrorKind::invalid_input, "masses sum to " + std::to_string(sum));
  }
}

ActionDistribution ActionDistribution::uniform(int m) {
  require_dimension(m < 0 ? 0 : static_cast<std::size_t>(m));
  return ActionDistribution(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
}

ActionDistribution ActionDistribution::point_mass(int m, int arm) {
  require_dimension(m < 0 ? 0 : static_cast<std::size_t>(m));
  if (arm < 0 || arm >= m) {
    throw Error(ErrorKind::invalid_input, "arm index out of range");
  }
  std::vector<double> masses(static_cast<std::size_t>(m), 0.0);
  masses[static_cast<std::size_t>(arm)] = 1.0;
  return ActionDistribution(std::move(masses));
}

ActionDistribution ActionDistribution::normalized(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorKind::invalid_input, "weights have no positive mass");
  }
  for (double& w : weights) w /= total;
  return ActionDistribution(std::move(weights));
}

int ActionDistribution::argmax() const noexcept {
  return static_cast<int>(std::max_element(masses_.begin(), masses_.end()) - masses_.begin());
}

RewardVector::RewardVector(std::vector<double> rewards, double support)
    : rewards_(std::move(rewards)), support_(support) {
  if (rewards_.empty()) {
    throw Error(ErrorKind::invalid_dimension, "empty reward vector");
  }
  if (!(support > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "support bound must be positive");
  }
  for (double g : rewards_) {
    if (!std::isfinite(g) || std::abs(g) > support_) {
      throw Error(ErrorKind::invalid_reward,
                  "reward " + std::to_string(g) + " outside [-" + std::to_string(support_) + ", " +
                      std::to_string(support_) + "]");
    }
  }
}

RewardVector::RewardVector(std::vector<double> rewards)
    : RewardVector(std::move(rewards), std::numeric_limits<double>::infinity()) {}

MeanVector::MeanVector(std::vector<double> means, MeanRange range)
    : means_(std::move(means)), range_(range) {
  if (means_.empty()) {
    throw Error(ErrorKind::invalid_dimension, "empty mean vector");
  }
  const double lo = range_ == MeanRange::stationary ? 0.0 : -1.0;
  for (double mu : means_) {
    if (!(mu >= lo && mu <= 1.0)) {
      throw Error(ErrorKind::invalid_input, "mean " + std::to_string(mu) + " outside its range");
    }
  }
}

PopulationCounts::PopulationCounts(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  for (std::int64_t c : counts_) {
    if (c < 0) {
      throw Error(ErrorKind::invalid_population, "negative arm count");
    }
    total_ += c;
  }
  if (total_ < 1) {
    throw Error(ErrorKind::invalid_population, "population must have at least one agent");
  }
}

PopulationCounts PopulationCounts::even_split(std::int64_t n, int m) {
  require_dimension(m < 0 ? 0 : static_cast<std::size_t>(m));
  if (n < 1) {
    throw Error(ErrorKind::invalid_population, "population must have at least one agent");
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m), n / m);
  for (std::int64_t j = 0; j < n % m; ++j) ++counts[static_cast<std::size_t>(j)];
  return PopulationCounts(std::move(counts));
}

ActionDistribution uniform_distribution(int m) { return ActionDistribution::uniform(m); }

ActionDistribution distribution_from_counts(const PopulationCounts& counts) {
  std::vector<double> masses(counts.values().size());
  const double n = static_cast<double>(counts.total());
  for (std::size_t j = 0; j < masses.size(); ++j) {
    masses[j] = static_cast<double>(counts[j]) / n;
  }
  return ActionDistribution(std::move(masses));
}

double l1_distance(const ActionDistribution& a, const ActionDistribution& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::invalid_dimension, "l1_distance on distributions of different size");
  }
  double total = 0.0;
  for (int j = 0; j < a.size(); ++j) total += std::abs(a[j] - b[j]);
  return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::invalid_dimension, "dot product of different lengths");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace gossip
