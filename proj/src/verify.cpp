#include "gossip/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "gossip/error.hpp"
#include "gossip/mwu.hpp"
#include "gossip/population.hpp"
#include "gossip/potentials.hpp"
#include "gossip/random.hpp"

namespace gossip {

namespace {

using PotentialFn = std::function<std::vector<double>(const PotentialFamily&,
                                                      std::span<const double>,
                                                      std::span<const double>)>;

PotentialFn potential_fn(const VerifyOptions& opts) {
  if (!opts.flip_potential_sign) {
    return [](const PotentialFamily& f, std::span<const double> p, std::span<const double> g) {
      return eval_potentials(f, p, g);
    };
  }
  return [](const PotentialFamily& f, std::span<const double> p, std::span<const double> g) {
    auto F = eval_potentials(f, p, g);
    F[0] = -F[0];
    return F;
  };
}

// Parameters at which every family runs in the experiments.
std::vector<PotentialFamily> experiment_families() {
  return {PotentialFamily::beta_adopt(0.75), PotentialFamily::disc_adopt(0.5, 1.0),
          PotentialFamily::sigmoid_adopt(2.0), PotentialFamily::softmax_compare(1.0),
          PotentialFamily::two_neighbor_softmax(1.0)};
}

// Parameters inside each family's certificate range for sigma = 1.
std::vector<PotentialFamily> certified_families() {
  return {PotentialFamily::beta_adopt(13.0 / 24.0), PotentialFamily::disc_adopt(1.0 / 12.0, 1.0),
          PotentialFamily::sigmoid_adopt(0.25), PotentialFamily::softmax_compare(1.0 / 6.0)};
}

std::vector<double> random_distribution(Engine& rng, int m) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(m));
  for (double& x : w) x = expo(rng);
  return ActionDistribution::normalized(std::move(w)).vec();
}

// Rewards inside the support each family accepts.
std::vector<double> random_rewards(Engine& rng, const PotentialFamily& family, int m) {
  std::vector<double> g(static_cast<std::size_t>(m));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& x : g) {
    switch (family.kind()) {
      case FamilyKind::beta_adopt:
        x = unit(rng) < 0.5 ? 1.0 : 0.0;
        break;
      case FamilyKind::disc_adopt:
        x = unit(rng) * family.sigma();
        break;
      default:
        x = 2.0 * unit(rng) - 1.0;
        break;
    }
  }
  return g;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// One-step moments of p^1 over replications for a fixed starting point.
struct Moments {
  std::vector<double> mean;
  std::vector<double> var;
  std::vector<double> fourth;  // central fourth moment
  std::size_t reps = 0;
};

Moments one_step_moments(const PotentialFamily& family, const PopulationCounts& start,
                         const RewardVector& g, StepMode mode, std::size_t reps,
                         std::uint64_t seed) {
  const auto m = static_cast<std::size_t>(start.size());
  std::vector<std::vector<double>> samples(m, std::vector<double>(reps));
  std::vector<std::int32_t> layout;
  for (std::size_t j = 0; j < m; ++j) {
    layout.insert(layout.end(), static_cast<std::size_t>(start[j]), static_cast<std::int32_t>(j));
  }
  const auto agents = PopulationState::from_assignments(std::move(layout), start.size());

  for (std::size_t r = 0; r < reps; ++r) {
    const RoundRng rng(mix64(seed + r), 0);
    ActionDistribution p1 = mode == StepMode::per_agent
                                ? step_per_agent(agents, g, family, rng).distribution()
                                : distribution_from_counts(step_aggregate(start, g, family, rng));
    for (std::size_t j = 0; j < m; ++j) samples[j][r] = p1[j];
  }

  Moments out;
  out.reps = reps;
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (double x : samples[j]) s += x;
    const double mean = s / static_cast<double>(reps);
    double v = 0.0;
    double f = 0.0;
    for (double x : samples[j]) {
      const double d = x - mean;
      v += d * d;
      f += d * d * d * d;
    }
    out.mean.push_back(mean);
    out.var.push_back(v / static_cast<double>(reps - 1));
    out.fourth.push_back(f / static_cast<double>(reps));
  }
  return out;
}

struct OneStepCase {
  PotentialFamily family;
  RewardVector g;
};

std::vector<OneStepCase> one_step_cases() {
  std::vector<OneStepCase> cases;
  for (const auto& f : experiment_families()) {
    if (f.kind() == FamilyKind::beta_adopt) {
      cases.push_back({f, RewardVector({1.0, 0.0, 1.0}, 1.0)});
    } else {
      cases.push_back({f, RewardVector({1.0, 0.0, 0.5}, 1.0)});
    }
  }
  return cases;
}

PopulationCounts one_step_start(std::int64_t n) {
  const std::int64_t a = n / 2;
  const std::int64_t b = 3 * n / 10;
  return PopulationCounts({a, b, n - a - b});
}

double z_score(double diff, double se) {
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(diff) / se;
}

}  // namespace

VerifyTier parse_verify_tier(std::string_view text) {
  if (text == "quick") return VerifyTier::quick;
  if (text == "full") return VerifyTier::full;
  throw Error(ErrorKind::invalid_parameter, "unknown verify tier '" + std::string(text) + "'");
}

CheckResult check_zero_sum(const VerifyOptions& opts) {
  const int trials = opts.tier == VerifyTier::full ? 10000 : 2000;
  const auto families = experiment_families();
  const auto F_of = potential_fn(opts);
  Engine rng(mix64(opts.seed ^ 0x5A5A));
  std::uniform_int_distribution<int> arms(2, 16);
  std::uniform_int_distribution<std::size_t> which(0, families.size() - 1);

  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto& family = families[which(rng)];
    const int m = arms(rng);
    const auto p = random_distribution(rng, m);
    const auto g = random_rewards(rng, family, m);
    const auto F = F_of(family, p, g);
    double residual = 0.0;
    for (std::size_t j = 0; j < F.size(); ++j) residual += p[j] * F[j];
    worst = std::max(worst, std::abs(residual));
  }
  return {"zero-sum", worst <= 1e-10, worst, 1e-10,
          std::to_string(trials) + " random (family, p, g), m in [2, 16]"};
}

CheckResult check_simplex_invariance(const VerifyOptions& opts) {
  const int steps = opts.tier == VerifyTier::full ? 1000 : 200;
  const auto F_of = potential_fn(opts);
  Engine rng(mix64(opts.seed ^ 0xC0FFEE));
  double worst_drift = 0.0;
  double min_mass = 1.0;
  for (const auto& family : experiment_families()) {
    const int m = 6;
    if (!opts.flip_potential_sign) {
      auto q = ActionDistribution::uniform(m);
      for (int t = 0; t < steps; ++t) {
        q = mwu_step(q, RewardVector(random_rewards(rng, family, m)), family);
        double sum = 0.0;
        for (double x : q.masses()) {
          sum += x;
          min_mass = std::min(min_mass, x);
        }
        worst_drift = std::max(worst_drift, std::abs(sum - 1.0));
      }
    } else {
      std::vector<double> q(static_cast<std::size_t>(m), 1.0 / m);
      for (int t = 0; t < steps; ++t) {
        const auto F = F_of(family, q, random_rewards(rng, family, m));
        double sum = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) {
          q[j] = std::max(0.0, q[j] * (1.0 + F[j]));
          sum += q[j];
          min_mass = std::min(min_mass, q[j]);
        }
        worst_drift = std::max(worst_drift, std::abs(sum - 1.0));
      }
    }
  }
  const bool ok = worst_drift <= 1e-8 && min_mass >= 0.0;
  return {"simplex-invariance", ok, worst_drift, 1e-8,
          std::to_string(steps) + " MWU steps per family, min mass " + format_double(min_mass)};
}

CheckResult check_linearization(const VerifyOptions&) {
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  for (double beta : {0.01, 0.05, 0.1, 0.2, 0.25}) {
    const auto e = verify_exp_linearization(beta, 201);
    const auto s = verify_sigmoid_linearization(beta, 201);
    for (auto [slack, tag] : {std::pair{e.lower_slack, "exp lower"}, {e.upper_slack, "exp upper"},
                              {s.lower_slack, "sigmoid lower"}, {s.upper_slack, "sigmoid upper"}}) {
      if (slack < worst) {
        worst = slack;
        where = std::string(tag) + " at beta=" + format_double(beta);
      }
    }
  }
  return {"linearization", worst >= -1e-12, worst, -1e-12, "minimum slack: " + where};
}

CheckResult check_certificate_bracket(const VerifyOptions& opts) {
  const int draws = opts.tier == VerifyTier::full ? 100 : 20;
  const int max_m = opts.tier == VerifyTier::full ? 10 : 6;
  Engine rng(mix64(opts.seed ^ 0xB0B));
  std::uniform_int_distribution<int> arms(2, max_m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  for (const auto& family : certified_families()) {
    const auto cert = certificate(family, 1.0);
    if (!cert.valid) {
      return {"certificate-bracket", false, 0.0, -1e-12,
              std::string(family.name()) + " certificate unexpectedly invalid"};
    }
    for (int i = 0; i < draws; ++i) {
      const int m = arms(rng);
      const auto q = random_distribution(rng, m);
      std::vector<double> mu(static_cast<std::size_t>(m));
      for (double& x : mu) x = unit(rng);

      std::vector<double> expected(static_cast<std::size_t>(m), 0.0);
      std::vector<double> g(static_cast<std::size_t>(m));
      for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double weight = 1.0;
        for (int j = 0; j < m; ++j) {
          const bool hit = ((mask >> j) & 1u) != 0;
          g[static_cast<std::size_t>(j)] = hit ? 1.0 : 0.0;
          weight *= hit ? mu[static_cast<std::size_t>(j)] : 1.0 - mu[static_cast<std::size_t>(j)];
        }
        if (weight == 0.0) continue;
        const auto F = eval_potentials(family, q, g);
        for (std::size_t j = 0; j < F.size(); ++j) expected[j] += weight * F[j];
      }
      const double qmu = dot(q, mu);
      for (std::size_t j = 0; j < expected.size(); ++j) {
        const double d = mu[j] - qmu;
        const double lower = expected[j] - cert.alpha1 / 3.0 * (d - cert.delta);
        const double upper = cert.alpha2 / 3.0 * (d + cert.delta) - expected[j];
        const double slack = std::min(lower, upper);
        if (slack < worst) {
          worst = slack;
          where = std::string(family.name()) + " m=" + std::to_string(m);
        }
      }
    }
  }
  return {"certificate-bracket", worst >= -1e-12, worst, -1e-12, "minimum slack: " + where};
}

CheckResult check_mode_equivalence(const VerifyOptions& opts) {
  const bool full = opts.tier == VerifyTier::full;
  const std::size_t reps = full ? 10000 : 1500;
  const auto start = one_step_start(full ? 2000 : 500);
  double worst = 0.0;
  std::string where;
  std::uint64_t salt = 0;
  for (const auto& c : one_step_cases()) {
    salt += 0x100000;
    const auto a = one_step_moments(c.family, start, c.g, StepMode::per_agent, reps, opts.seed + salt);
    const auto b = one_step_moments(c.family, start, c.g, StepMode::aggregate, reps,
                                    opts.seed + salt + 0x80000);
    const double k = static_cast<double>(reps);
    for (std::size_t j = 0; j < a.mean.size(); ++j) {
      const double zm = z_score(a.mean[j] - b.mean[j], std::sqrt((a.var[j] + b.var[j]) / k));
      const double va = std::max(0.0, a.fourth[j] - a.var[j] * a.var[j]) / k;
      const double vb = std::max(0.0, b.fourth[j] - b.var[j] * b.var[j]) / k;
      const double zv = z_score(a.var[j] - b.var[j], std::sqrt(va + vb));
      const double z = std::max(zm, zv);
      if (z > worst) {
        worst = z;
        where = std::string(c.family.name()) + " arm " + std::to_string(j);
      }
    }
  }
  return {"mode-equivalence", worst <= 5.0, worst, 5.0,
          std::to_string(reps) + " replications per mode, worst z at " + where};
}

CheckResult check_one_step_mean(const VerifyOptions& opts) {
  const bool full = opts.tier == VerifyTier::full;
  const std::size_t reps = full ? 10000 : 1500;
  const auto start = one_step_start(full ? 2000 : 500);
  const auto p0 = distribution_from_counts(start);
  double worst = 0.0;
  std::string where;
  std::uint64_t salt = 0x7000000;
  for (const auto& c : one_step_cases()) {
    const auto expected = conditional_next(p0, c.g, c.family);
    for (StepMode mode : {StepMode::per_agent, StepMode::aggregate}) {
      salt += 0x100000;
      const auto mom = one_step_moments(c.family, start, c.g, mode, reps, opts.seed + salt);
      for (std::size_t j = 0; j < mom.mean.size(); ++j) {
        const double z = z_score(mom.mean[j] - expected[j],
                                 std::sqrt(mom.var[j] / static_cast<double>(reps)));
        if (z > worst) {
          worst = z;
          where = std::string(c.family.name()) + " " + std::string(to_string(mode)) + " arm " +
                  std::to_string(j);
        }
      }
    }
  }
  return {"one-step-mean", worst <= 5.0, worst, 5.0,
          std::to_string(reps) + " replications, worst z at " + where};
}

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  return {check_zero_sum(opts),           check_simplex_invariance(opts),
          check_linearization(opts),      check_certificate_bracket(opts),
          check_mode_equivalence(opts),   check_one_step_mean(opts)};
}

}  // namespace gossip
