#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gossip/mwu.hpp"
#include "gossip/potentials.hpp"
#include "gossip/rewards.hpp"

namespace gossip {

struct RegretReport {
  /// R(T) = max_j sum_t mu^t_j - sum_t <p^t, g^t>.
  double cumulative = 0.0;
  /// per_round[t] = R(t+1) - R(t), so the series sums to `cumulative`.
  std::vector<double> per_round;
  /// Arm attaining the max in R(T); lowest index on ties.
  int best_arm = 0;
  /// sum_t mu^t_j - sum_t <p^t, g^t> for every arm j.
  std::vector<double> per_arm;
};

/// Regret of the distributions p[0..T-1] against rewards g and means mu (T each).
/// p may carry one extra trailing entry (the post-run state), which is ignored.
RegretReport population_regret(std::span<const ActionDistribution> p,
                               std::span<const RewardVector> g, std::span<const MeanVector> mu);
RegretReport population_regret(const TrajectoryRecord& run);

/// sum_{t=1..T} ||p^t - q^t||_1 (the t = 0 term is zero by construction).
double coupling_error_sum(const CoupledTrajectory& coupled);

struct BoundInputs {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double gamma = 0.0;
  double T = 0.0;
  bool stationary = false;
};

/// Regret bound for the zero-sum MWU process started with every q^0_j >= rho.
/// Stationary: 6 ln(1/rho)/alpha1 + gamma (requires delta = 0).
/// Adversarial: 3 ln(1/rho)/alpha1 + 2(alpha2^2/alpha1 + (alpha2-alpha1)/alpha1
///              + delta alpha2/alpha1) T + gamma.
double mwu_regret_bound(const BoundInputs& in);

struct CouplingInputs {
  double lipschitz_L = 2.0;
  int tau = 1;
  int epochs = 1;
  int m = 2;
  double sigma = 1.0;
  double n = 0.0;
  double c = 1.0;
};

/// kappa^tau D m sigma sqrt(3 c ln n) / sqrt(n) + 2 m sigma T / n^c with kappa = 3 + L.
double coupling_error_bound(const CouplingInputs& in);

struct EpochBound {
  std::vector<double> per_epoch;  // MWU bound of each epoch, without gamma
  double coupling = 0.0;
  double gamma = 0.0;
  double total = 0.0;
};

/// Sum over epochs of the tau-round MWU bound (epoch d uses floor rho[d]),
/// plus the coupling term and gamma once. floors.size() is the epoch count D.
EpochBound epoch_regret_bound(const ParameterCertificate& cert, std::span<const double> floors,
                              int tau, double sigma, int m, double n, double c, double gamma,
                              bool stationary);

/// Exact minimizer of a diagonal quadratic over the simplex via the KKT conditions.
ActionDistribution minimize_on_simplex(const ConvexFunctionSpec& fn);

/// f(p~) - min f with p~ the average of p^0..p^{T-1}.
double convex_error(const TrajectoryRecord& run, const ConvexFunctionSpec& fn);
double convex_error(const ActionDistribution& p_avg, const ConvexFunctionSpec& fn);
ActionDistribution average_distribution(const TrajectoryRecord& run);

/// floor(4 ln(n / (2m))). Requires n > 2m.
int mass_survival_horizon(double n, int m);

/// Seed-level summary statistics; quartiles use linear interpolation between
/// order statistics (R type 7).
struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

SampleSummary summarize(std::span<const double> xs);
double quantile(std::vector<double> xs, double prob);

}  // namespace gossip
