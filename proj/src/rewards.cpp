#include "gossip/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gossip/error.hpp"

namespace gossip {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_arms(const ConvexFunctionSpec& fn, const ActionDistribution& p) {
  if (fn.size() != p.size()) {
    throw Error(ErrorKind::invalid_dimension, "convex function has " + std::to_string(fn.size()) +
                                                  " coordinates, point has " +
                                                  std::to_string(p.size()));
  }
}

}  // namespace

ConvexFunctionSpec ConvexFunctionSpec::benchmark() {
  return ConvexFunctionSpec{{3.0 / 5.0, 3.0 / 10.0, 0.0}, {-5.0 / 6.0, 0.0, 1.0 / 15.0}, 44.0 / 15.0};
}

void ConvexFunctionSpec::validate() const {
  if (quadratic.size() != linear.size()) {
    throw Error(ErrorKind::invalid_parameter, "quadratic and linear coefficients differ in length");
  }
  if (quadratic.size() < 2) {
    throw Error(ErrorKind::invalid_dimension, "convex function needs at least 2 coordinates");
  }
  for (double a : quadratic) {
    if (!(a >= 0.0)) {
      throw Error(ErrorKind::invalid_parameter, "quadratic coefficients must be non-negative");
    }
  }
}

double eval_convex(const ConvexFunctionSpec& fn, const ActionDistribution& p) {
  require_arms(fn, p);
  double value = fn.constant;
  for (int j = 0; j < p.size(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    value += fn.quadratic[k] * p[k] * p[k] + fn.linear[k] * p[k];
  }
  return value;
}

std::vector<double> gradient(const ConvexFunctionSpec& fn, const ActionDistribution& p) {
  require_arms(fn, p);
  std::vector<double> grad(static_cast<std::size_t>(p.size()));
  for (std::size_t j = 0; j < grad.size(); ++j) {
    grad[j] = 2.0 * fn.quadratic[j] * p[j] + fn.linear[j];
  }
  return grad;
}

double gradient_bound(const ConvexFunctionSpec& fn) {
  double G = 0.0;
  for (std::size_t j = 0; j < fn.quadratic.size(); ++j) {
    G = std::max({G, std::abs(fn.linear[j]), std::abs(2.0 * fn.quadratic[j] + fn.linear[j])});
  }
  return G;
}

RewardModel RewardModel::stationary_bernoulli(MeanVector means) {
  if (means.range() != MeanRange::stationary) means = MeanVector(std::vector<double>(means.values().begin(), means.values().end()), MeanRange::stationary);
  const int m = means.size();
  return RewardModel(StationaryBernoulli{std::move(means)}, m, 1.0);
}

RewardModel RewardModel::scaled_bernoulli(MeanVector means, double sigma) {
  if (!(sigma >= 1.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::invalid_parameter, "scaled Bernoulli needs sigma >= 1");
  }
  if (means.range() != MeanRange::stationary) means = MeanVector(std::vector<double>(means.values().begin(), means.values().end()), MeanRange::stationary);
  const int m = means.size();
  return RewardModel(StationaryScaledBernoulli{std::move(means), sigma}, m, sigma);
}

RewardModel RewardModel::adversarial(std::vector<MeanVector> schedule, double noise_halfwidth,
                                     double sigma) {
  if (schedule.empty()) throw Error(ErrorKind::invalid_parameter, "empty mean schedule");
  if (!(noise_halfwidth >= 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "noise half-width must be non-negative");
  }
  if (!(sigma >= 1.0)) throw Error(ErrorKind::invalid_parameter, "sigma must be >= 1");
  const int m = schedule.front().size();
  for (const auto& mu : schedule) {
    if (mu.size() != m) throw Error(ErrorKind::invalid_dimension, "ragged mean schedule");
  }
  return RewardModel(AdversarialScript{std::move(schedule), noise_halfwidth, sigma, false, m}, m,
                     sigma);
}

RewardModel RewardModel::leader_punishing(int arms, double noise_halfwidth, double sigma) {
  if (arms < 2) throw Error(ErrorKind::invalid_dimension, "need at least 2 arms");
  if (!(noise_halfwidth >= 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "noise half-width must be non-negative");
  }
  if (!(sigma >= 1.0)) throw Error(ErrorKind::invalid_parameter, "sigma must be >= 1");
  return RewardModel(AdversarialScript{{}, noise_halfwidth, sigma, true, arms}, arms, sigma);
}

RewardModel RewardModel::gradient_oracle(ConvexFunctionSpec fn, double G, double noise_sd,
                                         double clip) {
  fn.validate();
  if (!(G > 0.0) || !std::isfinite(G)) {
    throw Error(ErrorKind::invalid_parameter, "gradient bound G must be positive");
  }
  if (G + 1e-12 < gradient_bound(fn)) {
    throw Error(ErrorKind::invalid_parameter, "G is below the function's gradient bound");
  }
  if (!(noise_sd >= 0.0)) throw Error(ErrorKind::invalid_parameter, "noise_sd must be >= 0");
  if (!(clip >= 1.0 && clip <= 10.0)) {
    throw Error(ErrorKind::invalid_parameter, "clip must lie in [1, 10]");
  }
  const int m = fn.size();
  return RewardModel(GradientOracle{std::move(fn), G, noise_sd, clip}, m, clip);
}

bool RewardModel::stationary() const noexcept {
  return std::holds_alternative<StationaryBernoulli>(model_) ||
         std::holds_alternative<StationaryScaledBernoulli>(model_);
}

RewardDraw RewardModel::next(int t, const ActionDistribution& p, Engine& stream) const {
  if (t < 0) throw Error(ErrorKind::invalid_input, "negative round index");
  if (p.size() != arms_) {
    throw Error(ErrorKind::invalid_dimension, "distribution does not match the reward model");
  }
  const auto m = static_cast<std::size_t>(arms_);

  return std::visit(
      overloaded{
          [&](const StationaryBernoulli& s) {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::vector<double> g(m);
            for (std::size_t j = 0; j < m; ++j) g[j] = unif(stream) < s.means[j] ? 1.0 : 0.0;
            return RewardDraw{RewardVector(std::move(g), 1.0), s.means};
          },
          [&](const StationaryScaledBernoulli& s) {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::vector<double> g(m);
            for (std::size_t j = 0; j < m; ++j) {
              g[j] = unif(stream) < s.means[j] / s.sigma ? s.sigma : 0.0;
            }
            return RewardDraw{RewardVector(std::move(g), s.sigma), s.means};
          },
          [&](const AdversarialScript& s) {
            std::vector<double> mu;
            if (s.leader_punishing) {
              mu.assign(m, 1.0);
              mu[static_cast<std::size_t>(p.argmax())] = -1.0;
            } else {
              if (static_cast<std::size_t>(t) >= s.schedule.size()) {
                throw Error(ErrorKind::schedule_exhausted,
                            "round " + std::to_string(t) + " beyond a schedule of " +
                                std::to_string(s.schedule.size()) + " rounds");
              }
              const auto& row = s.schedule[static_cast<std::size_t>(t)];
              mu.assign(row.values().begin(), row.values().end());
            }
            std::vector<double> g = mu;
            if (s.noise_halfwidth > 0.0) {
              std::uniform_real_distribution<double> noise(-s.noise_halfwidth, s.noise_halfwidth);
              for (double& x : g) x = std::clamp(x + noise(stream), -s.sigma, s.sigma);
            }
            return RewardDraw{RewardVector(std::move(g), s.sigma), MeanVector(std::move(mu))};
          },
          [&](const GradientOracle& o) {
            auto grad = gradient(o.fn, p);
            std::vector<double> mu(m);
            for (std::size_t j = 0; j < m; ++j) {
              // Guard against -0.0 and ulp excursions past the unit box.
              mu[j] = std::clamp(-grad[j] / o.G, -1.0, 1.0) + 0.0;
            }
            std::vector<double> g = mu;
            if (o.noise_sd > 0.0) {
              std::normal_distribution<double> noise(0.0, o.noise_sd);
              for (double& x : g) x = std::clamp(x + noise(stream), -o.clip, o.clip);
            }
            return RewardDraw{RewardVector(std::move(g), o.clip), MeanVector(std::move(mu))};
          },
      },
      model_);
}

RewardDraw next_reward(const RewardModel& model, int t, const ActionDistribution& p,
                       Engine& stream) {
  return model.next(t, p, stream);
}

MeanVector evenly_spaced_means(int m, double hi, double lo) {
  if (m < 2) throw Error(ErrorKind::invalid_dimension, "need at least 2 arms");
  std::vector<double> means(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) means[static_cast<std::size_t>(j)] = hi + (lo - hi) * j / (m - 1);
  return MeanVector(std::move(means), lo >= 0.0 ? MeanRange::stationary : MeanRange::adversarial);
}

}  // namespace gossip
