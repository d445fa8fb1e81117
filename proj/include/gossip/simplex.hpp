#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace gossip {

/// Maximum allowed |sum - 1| for a point on the simplex.
inline constexpr double kSimplexTolerance = 1e-9;

/// A point on the probability simplex: the fraction of agents on each arm.
///
/// Construction validates (m >= 2, non-negative, unit sum within
/// kSimplexTolerance) but never renormalizes, so multiplicative updates that
/// preserve the simplex analytically can be checked for drift.
class ActionDistribution {
 public:
  explicit ActionDistribution(std::vector<double> masses);

  static ActionDistribution uniform(int m);
  static ActionDistribution point_mass(int m, int arm);
  /// Rescales non-negative weights to unit sum.
  static ActionDistribution normalized(std::vector<double> weights);

  int size() const noexcept { return static_cast<int>(masses_.size()); }
  double operator[](std::size_t j) const { return masses_[j]; }
  std::span<const double> masses() const noexcept { return masses_; }
  const std::vector<double>& vec() const noexcept { return masses_; }
  /// Index of the largest mass; ties go to the lowest index.
  int argmax() const noexcept;

  friend bool operator==(const ActionDistribution&, const ActionDistribution&) = default;

 private:
  std::vector<double> masses_;
};

/// One realized reward per arm, within the declared support [-sigma, sigma].
class RewardVector {
 public:
  /// Reward vector with declared support bound sigma.
  RewardVector(std::vector<double> rewards, double support);
  /// Reward vector with no declared support bound.
  explicit RewardVector(std::vector<double> rewards);

  int size() const noexcept { return static_cast<int>(rewards_.size()); }
  double operator[](std::size_t j) const { return rewards_[j]; }
  std::span<const double> values() const noexcept { return rewards_; }
  double support() const noexcept { return support_; }

 private:
  std::vector<double> rewards_;
  double support_ = std::numeric_limits<double>::infinity();
};

enum class MeanRange {
  stationary,   // [0, 1]
  adversarial,  // [-1, 1]
};

class MeanVector {
 public:
  explicit MeanVector(std::vector<double> means, MeanRange range = MeanRange::adversarial);

  int size() const noexcept { return static_cast<int>(means_.size()); }
  double operator[](std::size_t j) const { return means_[j]; }
  std::span<const double> values() const noexcept { return means_; }
  MeanRange range() const noexcept { return range_; }

 private:
  std::vector<double> means_;
  MeanRange range_;
};

/// Exact number of agents per arm; total n >= 1.
class PopulationCounts {
 public:
  explicit PopulationCounts(std::vector<std::int64_t> counts);

  /// Splits n agents as evenly as possible, the first n mod m arms get one more.
  static PopulationCounts even_split(std::int64_t n, int m);

  int size() const noexcept { return static_cast<int>(counts_.size()); }
  std::int64_t total() const noexcept { return total_; }
  std::int64_t operator[](std::size_t j) const { return counts_[j]; }
  std::span<const std::int64_t> values() const noexcept { return counts_; }

  friend bool operator==(const PopulationCounts&, const PopulationCounts&) = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

ActionDistribution uniform_distribution(int m);
ActionDistribution distribution_from_counts(const PopulationCounts& counts);
double l1_distance(const ActionDistribution& a, const ActionDistribution& b);

/// <a, b> for equal-length spans.
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace gossip
