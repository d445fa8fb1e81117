#include <doctest.h>

#include <cmath>
#include <random>

#include "gossip/error.hpp"
#include "gossip/potentials.hpp"
#include "oracles.hpp"

using namespace gossip;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, int m) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(static_cast<std::size_t>(m));
  for (double& x : w) x = e(rng);
  return ActionDistribution::normalized(w).vec();
}

struct Case {
  PotentialFamily family;
  oracle::Rule rule;
};

std::vector<Case> all_families() {
  return {{PotentialFamily::beta_adopt(0.75), oracle::Rule::beta_adopt},
          {PotentialFamily::disc_adopt(0.5, 1.0), oracle::Rule::disc_adopt},
          {PotentialFamily::sigmoid_adopt(2.0), oracle::Rule::sigmoid_adopt},
          {PotentialFamily::softmax_compare(1.0), oracle::Rule::softmax_compare},
          {PotentialFamily::two_neighbor_softmax(1.0), oracle::Rule::two_neighbor}};
}

std::vector<double> rewards_for(std::mt19937_64& rng, const PotentialFamily& f, int m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> g(static_cast<std::size_t>(m));
  for (double& x : g) {
    if (f.kind() == FamilyKind::beta_adopt) {
      x = u(rng) < 0.5 ? 0.0 : 1.0;
    } else if (f.kind() == FamilyKind::disc_adopt) {
      x = u(rng);
    } else {
      x = 2.0 * u(rng) - 1.0;
    }
  }
  return g;
}

}  // namespace

TEST_CASE("adoption probabilities") {
  CHECK(adoption_prob(PotentialFamily::beta_adopt(13.0 / 24.0), 1.0) == doctest::Approx(13.0 / 24.0));
  CHECK(adoption_prob(PotentialFamily::beta_adopt(0.75), 0.0) == doctest::Approx(0.25));
  CHECK(adoption_prob(PotentialFamily::sigmoid_adopt(3.7), 0.0) == 0.5);
  CHECK(adoption_prob(PotentialFamily::disc_adopt(0.05, 1.0), 1.0) == doctest::Approx(0.05));
  CHECK_THROWS_AS(adoption_prob(PotentialFamily::softmax_compare(1.0), 1.0), Error);
  CHECK_THROWS_AS(adoption_prob(PotentialFamily::beta_adopt(0.75), 0.5), Error);
  CHECK_THROWS_AS(adoption_prob(PotentialFamily::disc_adopt(0.5, 1.0), 1.5), Error);
}

TEST_CASE("family parameter validation") {
  CHECK_THROWS_AS(PotentialFamily::beta_adopt(0.5), Error);
  CHECK_THROWS_AS(PotentialFamily::beta_adopt(1.0), Error);
  CHECK_THROWS_AS(PotentialFamily::disc_adopt(0.0, 1.0), Error);
  CHECK_THROWS_AS(PotentialFamily::disc_adopt(0.6, 2.0), Error);
  CHECK_THROWS_AS(PotentialFamily::from_name("no-such-rule", 1.0), Error);
  CHECK(PotentialFamily::from_name("softmax-compare", 1.0).kind() == FamilyKind::softmax_compare);
}

TEST_CASE("comparison weights") {
  const auto fam = PotentialFamily::softmax_compare(1.0);
  const auto same = comparison_weights(fam, 0.3, 0.3);
  CHECK(same.own == doctest::Approx(0.5));
  CHECK(same.other == doctest::Approx(0.5));
  const auto w = comparison_weights(fam, 1.0, 0.0);
  CHECK(w.own == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-14));
  CHECK(w.other == doctest::Approx(1.0 / (std::exp(1.0) + 1.0)).epsilon(1e-14));
  CHECK(w.own == doctest::Approx(0.731059).epsilon(1e-6));
  const auto flat = comparison_weights(PotentialFamily::softmax_compare(0.0), 5.0, -3.0);
  CHECK(flat.own == 0.5);
  CHECK_THROWS_AS(comparison_weights(PotentialFamily::sigmoid_adopt(1.0), 0.0, 1.0), Error);
}

TEST_CASE("potential examples") {
  const auto disc = PotentialFamily::disc_adopt(0.05, 1.0);
  const auto F = eval_potentials(disc, ActionDistribution({0.5, 0.5}), RewardVector({1.0, 0.0}));
  CHECK(F[0] == doctest::Approx(0.025).epsilon(1e-14));
  CHECK(F[1] == doctest::Approx(-0.025).epsilon(1e-14));

  for (const auto& c : all_families()) {
    const double g0 = c.family.kind() == FamilyKind::beta_adopt ? 1.0 : 0.4;
    const auto flat = eval_potentials(c.family, uniform_distribution(5), RewardVector(std::vector<double>(5, g0)));
    for (double x : flat) CHECK(std::abs(x) <= 1e-15);
  }
  CHECK_THROWS_AS(eval_potentials(disc, uniform_distribution(3), RewardVector({1.0, 0.0})), Error);
}

TEST_CASE("potentials agree with the behavioral oracle") {
  std::mt19937_64 rng(3);
  for (const auto& c : all_families()) {
    for (int i = 0; i < 40; ++i) {
      const int m = 2 + static_cast<int>(rng() % 6);
      const auto p = random_point(rng, m);
      const auto g = rewards_for(rng, c.family, m);
      const auto F = eval_potentials(c.family, p, g);
      const auto expect = oracle::behavioral_F(c.rule, c.family.beta(), p, g);
      for (std::size_t j = 0; j < F.size(); ++j) {
        CHECK(F[j] == doctest::Approx(expect[j]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("softmax potential matches the raw exponential form") {
  std::mt19937_64 rng(5);
  const auto fam = PotentialFamily::softmax_compare(0.7);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_point(rng, 6);
    const auto g = rewards_for(rng, fam, 6);
    const auto F = eval_potentials(fam, p, g);
    const auto raw = oracle::raw_softmax_F(0.7, p, g);
    for (std::size_t j = 0; j < F.size(); ++j) CHECK(F[j] == doctest::Approx(raw[j]).epsilon(1e-12));
  }
}

TEST_CASE("large scores stay finite") {
  const auto F = eval_potentials(PotentialFamily::softmax_compare(500.0), ActionDistribution({0.5, 0.5}),
                                 RewardVector({1.0, -1.0}));
  CHECK(F[0] == doctest::Approx(0.5));
  const auto H = eval_potentials(PotentialFamily::two_neighbor_softmax(800.0),
                                 ActionDistribution({0.5, 0.5}), RewardVector({1.0, -1.0}));
  CHECK(std::isfinite(H[0]));
  CHECK(std::isfinite(H[1]));
}

TEST_CASE("zero-sum residual") {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto& c = all_families()[rng() % 5];
    const int m = 2 + static_cast<int>(rng() % 15);
    const ActionDistribution p(random_point(rng, m));
    const RewardVector g(rewards_for(rng, c.family, m));
    worst = std::max(worst, std::abs(zero_sum_residual(c.family, p, g)));
  }
  CHECK(worst <= 1e-10);

  const auto adopt = PotentialFamily::sigmoid_adopt(1.0);
  const auto point = ActionDistribution::point_mass(4, 2);
  const RewardVector g({0.1, -0.4, 0.9, 0.3});
  CHECK(eval_potentials(adopt, point, g)[2] == 0.0);
  CHECK(zero_sum_residual(adopt, point, g) == 0.0);

  const auto two = PotentialFamily::two_neighbor_softmax(1.3);
  for (int i = 0; i < 200; ++i) {
    const ActionDistribution p(random_point(rng, 5));
    const RewardVector gg(rewards_for(rng, two, 5));
    CHECK(std::abs(zero_sum_residual(two, p, gg)) <= 1e-10);
  }
}

TEST_CASE("boundedness and Lipschitz property") {
  std::mt19937_64 rng(13);
  for (const auto& c : all_families()) {
    if (c.family.kind() == FamilyKind::two_neighbor_softmax) continue;
    for (int i = 0; i < 200; ++i) {
      const int m = 2 + static_cast<int>(rng() % 8);
      const auto p = random_point(rng, m);
      const auto q = random_point(rng, m);
      const auto g = rewards_for(rng, c.family, m);
      const auto Fp = eval_potentials(c.family, p, g);
      const auto Fq = eval_potentials(c.family, q, g);
      double dist = 0.0;
      for (int j = 0; j < m; ++j) dist += std::abs(p[j] - q[j]);
      for (int j = 0; j < m; ++j) {
        CHECK(std::abs(Fp[j]) <= 1.0);
        CHECK(std::abs(Fp[j] - Fq[j]) <= 2.0 * dist + 1e-12);
      }
    }
  }
}

TEST_CASE("two-neighbor potential range") {
  // Own arm much worse than both sampled arms: F_j -> -1; much better: F_j -> 2.
  const auto fam = PotentialFamily::two_neighbor_softmax(30.0);
  const auto F = eval_potentials(fam, ActionDistribution({0.01, 0.99}), RewardVector({1.0, -1.0}));
  CHECK(F[0] > 1.9);
  CHECK(F[0] < 2.0);
  CHECK(F[1] >= -1.0);
}

TEST_CASE("monotone decision probabilities") {
  for (auto fam : {PotentialFamily::disc_adopt(0.5, 2.0), PotentialFamily::sigmoid_adopt(2.0)}) {
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
      const double g = fam.kind() == FamilyKind::disc_adopt ? 2.0 * i / 100 : -1.0 + 2.0 * i / 100;
      const double v = adoption_prob(fam, g);
      CHECK(v >= prev);
      prev = v;
    }
  }
  CHECK(adoption_prob(PotentialFamily::beta_adopt(0.7), 1.0) >=
        adoption_prob(PotentialFamily::beta_adopt(0.7), 0.0));
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = score(PotentialFamily::softmax_compare(1.5), -1.0 + 2.0 * i / 100);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("certificates") {
  const auto soft = certificate(PotentialFamily::softmax_compare(0.02), 10.0);
  CHECK(soft.valid);
  CHECK(soft.alpha1 == doctest::Approx(0.03));
  CHECK(soft.alpha2 == doctest::Approx(0.03));
  CHECK(soft.delta == doctest::Approx(0.8));
  CHECK(soft.lipschitz_L == 2.0);

  const auto ba = certificate(PotentialFamily::beta_adopt(13.0 / 24.0), 1.0);
  CHECK(ba.valid);
  CHECK(ba.alpha1 == doctest::Approx(0.25));
  CHECK(ba.delta == 0.0);
  CHECK(ba.lipschitz_L == 2.0);

  const auto sig = certificate(PotentialFamily::sigmoid_adopt(2.0), 10.0);
  CHECK_FALSE(sig.valid);
  CHECK(sig.validity_reason.find("beta > min{1/(4 sigma), 1/3}") != std::string::npos);

  const auto disc = certificate(PotentialFamily::disc_adopt(1.0 / 12.0, 1.0), 1.0);
  CHECK(disc.valid);
  CHECK(disc.alpha1 == doctest::Approx(0.25));
  CHECK(disc.delta == 0.0);
  CHECK(disc.validity_reason.find("alpha = beta") != std::string::npos);

  CHECK_FALSE(certificate(PotentialFamily::beta_adopt(0.75), 1.0).valid);
  CHECK_FALSE(certificate(PotentialFamily::two_neighbor_softmax(0.1), 1.0).valid);
}

TEST_CASE("certificate bracket against the enumeration oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<Case> certified = {
      {PotentialFamily::beta_adopt(13.0 / 24.0), oracle::Rule::beta_adopt},
      {PotentialFamily::disc_adopt(1.0 / 12.0, 1.0), oracle::Rule::disc_adopt},
      {PotentialFamily::sigmoid_adopt(0.25), oracle::Rule::sigmoid_adopt},
      {PotentialFamily::softmax_compare(1.0 / 6.0), oracle::Rule::softmax_compare}};
  for (const auto& c : certified) {
    const auto cert = certificate(c.family, 1.0);
    REQUIRE(cert.valid);
    for (int i = 0; i < 20; ++i) {
      const int m = 2 + static_cast<int>(rng() % 5);
      const auto q = random_point(rng, m);
      std::vector<double> mu(static_cast<std::size_t>(m));
      for (double& x : mu) x = u(rng);
      const auto EF = oracle::expected_F_bernoulli(c.rule, c.family.beta(), q, mu);
      double qmu = 0.0;
      for (int j = 0; j < m; ++j) qmu += q[j] * mu[j];
      for (int j = 0; j < m; ++j) {
        const double d = mu[j] - qmu;
        CHECK(EF[j] >= cert.alpha1 / 3.0 * (d - cert.delta) - 1e-12);
        CHECK(EF[j] <= cert.alpha2 / 3.0 * (d + cert.delta) + 1e-12);
        if (cert.delta == 0.0 && c.rule == oracle::Rule::disc_adopt) {
          CHECK(std::abs(EF[j] - cert.alpha1 / 3.0 * d) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("linearization inequalities") {
  for (double beta : {0.01, 0.05, 0.1, 0.2, 0.25}) {
    CHECK(verify_exp_linearization(beta, 201).holds());
    CHECK(verify_sigmoid_linearization(beta, 201).holds());
  }
  CHECK_THROWS_AS(verify_exp_linearization(0.3, 11), Error);
  CHECK_THROWS_AS(verify_sigmoid_linearization(0.0, 11), Error);

  // Hand values at x = 10, y = -10, beta = 0.1 and at x = 5, beta = 0.2.
  CHECK(std::tanh(0.1 * 20 / 2) == doctest::Approx(0.761594).epsilon(1e-6));
  CHECK(1.0 / (1.0 + std::exp(-1.0)) == doctest::Approx(0.731059).epsilon(1e-6));
}
