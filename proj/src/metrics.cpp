#include "gossip/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gossip/error.hpp"

namespace gossip {

RegretReport population_regret(std::span<const ActionDistribution> p,
                               std::span<const RewardVector> g, std::span<const MeanVector> mu) {
  const std::size_t T = g.size();
  if (mu.size() != T || (p.size() != T && p.size() != T + 1)) {
    throw Error(ErrorKind::invalid_input, "regret inputs are misaligned: " +
                                              std::to_string(p.size()) + " distributions, " +
                                              std::to_string(T) + " rewards, " +
                                              std::to_string(mu.size()) + " means");
  }
  RegretReport report;
  if (T == 0) {
    report.per_arm.assign(p.empty() ? 0 : static_cast<std::size_t>(p.front().size()), 0.0);
    return report;
  }
  const auto m = static_cast<std::size_t>(mu.front().size());
  std::vector<double> arm_totals(m, 0.0);
  double collected = 0.0;
  double previous = 0.0;
  report.per_round.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    if (static_cast<std::size_t>(mu[t].size()) != m || static_cast<std::size_t>(g[t].size()) != m ||
        static_cast<std::size_t>(p[t].size()) != m) {
      throw Error(ErrorKind::invalid_input, "arm count changes at round " + std::to_string(t));
    }
    for (std::size_t j = 0; j < m; ++j) arm_totals[j] += mu[t][j];
    collected += dot(p[t].masses(), g[t].values());
    const double best = *std::max_element(arm_totals.begin(), arm_totals.end());
    const double regret = best - collected;
    report.per_round.push_back(regret - previous);
    previous = regret;
  }
  report.per_arm.resize(m);
  for (std::size_t j = 0; j < m; ++j) report.per_arm[j] = arm_totals[j] - collected;
  const auto best = std::max_element(report.per_arm.begin(), report.per_arm.end());
  report.best_arm = static_cast<int>(best - report.per_arm.begin());
  report.cumulative = *best;
  return report;
}

RegretReport population_regret(const TrajectoryRecord& run) {
  return population_regret(run.p, run.g, run.mu);
}

double coupling_error_sum(const CoupledTrajectory& coupled) {
  return std::accumulate(coupled.l1.begin(), coupled.l1.end(), 0.0);
}

double mwu_regret_bound(const BoundInputs& in) {
  if (!(in.alpha1 > 0.0) || !(in.alpha2 >= in.alpha1) || !std::isfinite(in.alpha2)) {
    throw Error(ErrorKind::invalid_parameter, "need 0 < alpha1 <= alpha2");
  }
  if (!(in.rho > 0.0 && in.rho <= 1.0)) throw Error(ErrorKind::invalid_parameter, "rho must lie in (0, 1]");
  if (!(in.gamma >= 0.0 && in.gamma <= 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "gamma must lie in [0, 1]");
  }
  if (!(in.delta >= 0.0) || !std::isfinite(in.delta)) {
    throw Error(ErrorKind::invalid_parameter, "delta must be non-negative");
  }
  if (!(in.T >= 0.0)) throw Error(ErrorKind::invalid_parameter, "T must be non-negative");

  const double log_term = std::log(1.0 / in.rho);
  if (in.stationary) {
    if (in.delta != 0.0) {
      throw Error(ErrorKind::invalid_parameter, "the stationary bound requires delta = 0");
    }
    return 6.0 * log_term / in.alpha1 + in.gamma;
  }
  const double a1 = in.alpha1;
  const double a2 = in.alpha2;
  const double drift = a2 * a2 / a1 + (a2 - a1) / a1 + in.delta * a2 / a1;
  return 3.0 * log_term / a1 + 2.0 * drift * in.T + in.gamma;
}

double coupling_error_bound(const CouplingInputs& in) {
  if (!(in.lipschitz_L > 0.0)) throw Error(ErrorKind::invalid_parameter, "L must be positive");
  if (in.tau < 1 || in.epochs < 1) {
    throw Error(ErrorKind::invalid_parameter, "tau and the epoch count must be positive");
  }
  if (in.m < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 arms");
  if (!(in.sigma > 0.0)) throw Error(ErrorKind::invalid_parameter, "sigma must be positive");
  if (!(in.c > 0.0)) throw Error(ErrorKind::invalid_parameter, "c must be positive");
  if (!(in.n > 1.0) || in.n < 3.0 * in.c * std::log(in.n)) {
    throw Error(ErrorKind::invalid_parameter, "need n >= 3 c ln n");
  }
  const double kappa = 3.0 + in.lipschitz_L;
  const double T = static_cast<double>(in.tau) * in.epochs;
  const double spread = std::pow(kappa, in.tau) * in.epochs * in.m * in.sigma *
                        std::sqrt(3.0 * in.c * std::log(in.n)) / std::sqrt(in.n);
  const double tail = 2.0 * in.m * in.sigma * T / std::pow(in.n, in.c);
  return spread + tail;
}

EpochBound epoch_regret_bound(const ParameterCertificate& cert, std::span<const double> floors,
                              int tau, double sigma, int m, double n, double c, double gamma,
                              bool stationary) {
  if (floors.empty()) throw Error(ErrorKind::invalid_parameter, "need at least one epoch floor");
  EpochBound out;
  out.per_epoch.reserve(floors.size());
  for (double rho : floors) {
    out.per_epoch.push_back(mwu_regret_bound(BoundInputs{cert.alpha1, cert.alpha2, cert.delta, rho,
                                                         0.0, static_cast<double>(tau), stationary}));
  }
  out.coupling = coupling_error_bound(CouplingInputs{cert.lipschitz_L, tau,
                                                     static_cast<int>(floors.size()), m, sigma, n, c});
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "gamma must lie in [0, 1]");
  }
  out.gamma = gamma;
  out.total = std::accumulate(out.per_epoch.begin(), out.per_epoch.end(), 0.0) + out.coupling +
              gamma;
  return out;
}

ActionDistribution minimize_on_simplex(const ConvexFunctionSpec& fn) {
  fn.validate();
  const auto m = static_cast<std::size_t>(fn.size());

  // Linear coordinates can absorb any leftover mass at multiplier min b_lin.
  double lin_floor = std::numeric_limits<double>::infinity();
  std::size_t lin_arm = m;
  std::vector<std::size_t> quad;
  for (std::size_t j = 0; j < m; ++j) {
    if (fn.quadratic[j] > 0.0) {
      quad.push_back(j);
    } else if (fn.linear[j] < lin_floor) {
      lin_floor = fn.linear[j];
      lin_arm = j;
    }
  }

  auto mass_at = [&](double lambda) {
    double s = 0.0;
    for (auto j : quad) s += std::max(0.0, (lambda - fn.linear[j]) / (2.0 * fn.quadratic[j]));
    return s;
  };

  std::vector<double> p(m, 0.0);
  double lambda = lin_floor;
  if (lin_arm == m || mass_at(lin_floor) >= 1.0) {
    // Active set grows in order of b_j; S(lambda) is linear between breakpoints.
    std::sort(quad.begin(), quad.end(),
              [&](std::size_t a, std::size_t b) { return fn.linear[a] < fn.linear[b]; });
    double inv_sum = 0.0;
    double weighted = 0.0;
    for (std::size_t k = 0; k < quad.size(); ++k) {
      const auto j = quad[k];
      inv_sum += 1.0 / (2.0 * fn.quadratic[j]);
      weighted += fn.linear[j] / (2.0 * fn.quadratic[j]);
      lambda = (1.0 + weighted) / inv_sum;
      const bool last = k + 1 == quad.size();
      if (last || lambda <= fn.linear[quad[k + 1]]) break;
    }
    for (auto j : quad) p[j] = std::max(0.0, (lambda - fn.linear[j]) / (2.0 * fn.quadratic[j]));
  } else {
    for (auto j : quad) p[j] = std::max(0.0, (lambda - fn.linear[j]) / (2.0 * fn.quadratic[j]));
    p[lin_arm] = 1.0 - mass_at(lin_floor);
  }
  return ActionDistribution(std::move(p));
}

ActionDistribution average_distribution(const TrajectoryRecord& run) {
  const int T = run.rounds();
  if (T < 1) throw Error(ErrorKind::invalid_input, "averaging needs at least one round");
  const auto m = static_cast<std::size_t>(run.p.front().size());
  std::vector<double> avg(m, 0.0);
  for (int t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < m; ++j) avg[j] += run.p[static_cast<std::size_t>(t)][j];
  }
  for (double& x : avg) x /= T;
  return ActionDistribution(std::move(avg));
}

double convex_error(const ActionDistribution& p_avg, const ConvexFunctionSpec& fn) {
  const double best = eval_convex(fn, minimize_on_simplex(fn));
  return std::max(0.0, eval_convex(fn, p_avg) - best);
}

double convex_error(const TrajectoryRecord& run, const ConvexFunctionSpec& fn) {
  return convex_error(average_distribution(run), fn);
}

int mass_survival_horizon(double n, int m) {
  if (m < 1 || !(n > 2.0 * m)) {
    throw Error(ErrorKind::invalid_parameter, "mass survival horizon needs n > 2m");
  }
  // The small offset keeps exact integers such as n = 2m e^k from rounding down.
  return static_cast<int>(std::floor(4.0 * std::log(n / (2.0 * m)) + 1e-9));
}

double quantile(std::vector<double> xs, double prob) {
  if (xs.empty()) throw Error(ErrorKind::invalid_input, "quantile of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

SampleSummary summarize(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorKind::invalid_input, "summary of an empty sample");
  SampleSummary s;
  s.count = xs.size();
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(s.count - 1) / static_cast<double>(s.count));
  }
  std::vector<double> v(xs.begin(), xs.end());
  s.q1 = quantile(v, 0.25);
  s.median = quantile(v, 0.5);
  s.q3 = quantile(std::move(v), 0.75);
  return s;
}

}  // namespace gossip
