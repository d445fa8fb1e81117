#include "gossip/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gossip/error.hpp"

namespace gossip {

namespace {

constexpr double kBoundaryEps = 1e-12;

void require_finite_beta(double beta) {
  if (!std::isfinite(beta)) {
    throw Error(ErrorKind::invalid_parameter, "beta must be finite");
  }
}

void require_same_size(std::span<const double> p, std::span<const double> g) {
  if (p.size() != g.size()) {
    throw Error(ErrorKind::invalid_dimension, "distribution has " + std::to_string(p.size()) +
                                                  " arms but reward vector has " +
                                                  std::to_string(g.size()));
  }
}

// (2 h_j - h_k - h_l) / (h_j + h_k + h_l) for h = exp, given exponents a_* = beta * g_*.
double three_way_quotient(double aj, double ak, double al) {
  const double top = std::max({aj, ak, al});
  const double hj = std::exp(aj - top);
  const double hk = std::exp(ak - top);
  const double hl = std::exp(al - top);
  return (2.0 * hj - hk - hl) / (hj + hk + hl);
}

std::string format_reason(const std::string& head, const ParameterCertificate& c) {
  std::ostringstream os;
  os << head << " (alpha1=" << c.alpha1 << ", alpha2=" << c.alpha2 << ", delta=" << c.delta
     << ", L=" << c.lipschitz_L << ")";
  return os.str();
}

// Checks the generic requirements 0 < a1 <= a2 <= 1/4, delta in [0, 1], L > 0.
// The upper end of alpha2 is inclusive so beta-adopt at beta = 13/24 qualifies.
std::string assumption_violation(const ParameterCertificate& c) {
  if (!(c.alpha1 > 0.0)) return "alpha1 must be positive";
  if (c.alpha1 > c.alpha2 + kBoundaryEps) return "alpha1 > alpha2";
  if (c.alpha2 > 0.25 + kBoundaryEps) return "alpha2 > 1/4";
  if (c.delta < 0.0 || c.delta > 1.0 + kBoundaryEps) return "delta outside [0, 1]";
  if (!(c.lipschitz_L > 0.0)) return "L must be positive";
  return {};
}

}  // namespace

PotentialFamily PotentialFamily::beta_adopt(double beta) {
  require_finite_beta(beta);
  if (!(beta > 0.5 && beta < 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "beta-adopt needs beta in (0.5, 1)");
  }
  return PotentialFamily(FamilyKind::beta_adopt, beta, 1.0);
}

PotentialFamily PotentialFamily::disc_adopt(double beta, double sigma) {
  require_finite_beta(beta);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::invalid_parameter, "disc-adopt needs a positive support bound");
  }
  if (!(beta > 0.0 && beta <= 1.0 / sigma + kBoundaryEps)) {
    throw Error(ErrorKind::invalid_parameter, "disc-adopt needs beta in (0, 1/sigma]");
  }
  return PotentialFamily(FamilyKind::disc_adopt, beta, sigma);
}

PotentialFamily PotentialFamily::sigmoid_adopt(double beta) {
  require_finite_beta(beta);
  if (beta < 0.0) throw Error(ErrorKind::invalid_parameter, "sigmoid-adopt needs beta >= 0");
  return PotentialFamily(FamilyKind::sigmoid_adopt, beta, 1.0);
}

PotentialFamily PotentialFamily::softmax_compare(double beta) {
  require_finite_beta(beta);
  if (beta < 0.0) throw Error(ErrorKind::invalid_parameter, "softmax-compare needs beta >= 0");
  return PotentialFamily(FamilyKind::softmax_compare, beta, 1.0);
}

PotentialFamily PotentialFamily::two_neighbor_softmax(double beta) {
  require_finite_beta(beta);
  if (beta < 0.0) {
    throw Error(ErrorKind::invalid_parameter, "two-neighbor-softmax needs beta >= 0");
  }
  return PotentialFamily(FamilyKind::two_neighbor_softmax, beta, 1.0);
}

PotentialFamily PotentialFamily::from_name(std::string_view name, double beta, double sigma) {
  if (name == "beta-adopt") return beta_adopt(beta);
  if (name == "disc-adopt") return disc_adopt(beta, sigma);
  if (name == "sigmoid-adopt") return sigmoid_adopt(beta);
  if (name == "softmax-compare") return softmax_compare(beta);
  if (name == "two-neighbor-softmax") return two_neighbor_softmax(beta);
  throw Error(ErrorKind::invalid_parameter, "unknown algorithm '" + std::string(name) + "'");
}

bool PotentialFamily::is_adoption() const noexcept {
  return kind_ == FamilyKind::beta_adopt || kind_ == FamilyKind::disc_adopt ||
         kind_ == FamilyKind::sigmoid_adopt;
}

std::string_view PotentialFamily::name() const noexcept {
  switch (kind_) {
    case FamilyKind::beta_adopt: return "beta-adopt";
    case FamilyKind::disc_adopt: return "disc-adopt";
    case FamilyKind::sigmoid_adopt: return "sigmoid-adopt";
    case FamilyKind::softmax_compare: return "softmax-compare";
    case FamilyKind::two_neighbor_softmax: return "two-neighbor-softmax";
  }
  return "unknown";
}

double adoption_prob(const PotentialFamily& family, double g) {
  switch (family.kind()) {
    case FamilyKind::beta_adopt:
      if (g == 1.0) return family.beta();
      if (g == 0.0) return 1.0 - family.beta();
      throw Error(ErrorKind::invalid_reward, "beta-adopt needs binary rewards, got " + std::to_string(g));
    case FamilyKind::disc_adopt:
      if (!(g >= 0.0 && g <= family.sigma())) {
        throw Error(ErrorKind::invalid_reward,
                    "disc-adopt reward " + std::to_string(g) + " outside [0, sigma]");
      }
      return std::min(1.0, family.beta() * g);
    case FamilyKind::sigmoid_adopt:
      if (std::isnan(g)) throw Error(ErrorKind::invalid_reward, "NaN reward");
      return 1.0 / (1.0 + std::exp(-family.beta() * g));
    case FamilyKind::softmax_compare:
    case FamilyKind::two_neighbor_softmax:
      break;
  }
  throw Error(ErrorKind::wrong_family,
              std::string(family.name()) + " is not an adoption family");
}

double score(const PotentialFamily& family, double g) {
  if (family.is_adoption()) {
    throw Error(ErrorKind::wrong_family, std::string(family.name()) + " has no score function");
  }
  return std::exp(family.beta() * g);
}

ComparisonWeights comparison_weights(const PotentialFamily& family, double g_own, double g_other) {
  if (family.kind() != FamilyKind::softmax_compare) {
    throw Error(ErrorKind::wrong_family,
                std::string(family.name()) + " is not a pairwise comparison family");
  }
  // h(own) / (h(own) + h(other)) written as a logistic to avoid overflow.
  const double own = 1.0 / (1.0 + std::exp(family.beta() * (g_other - g_own)));
  return {own, 1.0 - own};
}

std::vector<double> eval_potentials(const PotentialFamily& family, std::span<const double> p,
                                    std::span<const double> g) {
  require_same_size(p, g);
  const std::size_t m = p.size();
  std::vector<double> F(m, 0.0);

  switch (family.kind()) {
    case FamilyKind::beta_adopt:
    case FamilyKind::disc_adopt:
    case FamilyKind::sigmoid_adopt: {
      std::vector<double> f(m);
      for (std::size_t j = 0; j < m; ++j) f[j] = adoption_prob(family, g[j]);
      const double avg = dot(p, f);
      for (std::size_t j = 0; j < m; ++j) F[j] = f[j] - avg;
      break;
    }
    case FamilyKind::softmax_compare: {
      // (e^{bx} - e^{by}) / (e^{bx} + e^{by}) == tanh(b (x - y) / 2)
      const double half_beta = 0.5 * family.beta();
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += p[k] * std::tanh(half_beta * (g[j] - g[k]));
        F[j] = s;
      }
      break;
    }
    case FamilyKind::two_neighbor_softmax: {
      std::vector<double> a(m);
      for (std::size_t j = 0; j < m; ++j) a[j] = family.beta() * g[j];
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          if (p[k] == 0.0) continue;
          double row = 0.0;
          for (std::size_t l = 0; l < m; ++l) {
            if (p[l] == 0.0) continue;
            row += p[l] * three_way_quotient(a[j], a[k], a[l]);
          }
          s += p[k] * row;
        }
        F[j] = s;
      }
      break;
    }
  }
  return F;
}

std::vector<double> eval_potentials(const PotentialFamily& family, const ActionDistribution& p,
                                    const RewardVector& g) {
  return eval_potentials(family, p.masses(), g.values());
}

double zero_sum_residual(const PotentialFamily& family, const ActionDistribution& p,
                         const RewardVector& g) {
  const auto F = eval_potentials(family, p, g);
  return dot(p.masses(), F);
}

ParameterCertificate certificate(const PotentialFamily& family, double sigma) {
  ParameterCertificate c;
  const double beta = family.beta();
  std::string range_violation;

  switch (family.kind()) {
    case FamilyKind::softmax_compare:
      c.alpha1 = c.alpha2 = 1.5 * beta;
      c.delta = 4.0 * beta * sigma;
      c.lipschitz_L = 2.0;
      if (sigma < 1.0 || sigma > 10.0) {
        range_violation = "sigma outside [1, 10]";
      } else if (!(beta > 0.0 && beta <= 1.0 / (4.0 * sigma) + kBoundaryEps)) {
        range_violation = "beta > 1/(4 sigma)";
      }
      break;
    case FamilyKind::sigmoid_adopt:
      c.alpha1 = c.alpha2 = 0.75 * beta;
      c.delta = 4.0 * beta * sigma;
      c.lipschitz_L = 2.0;
      if (sigma < 1.0 || sigma > 10.0) {
        range_violation = "sigma outside [1, 10]";
      } else if (!(beta > 0.0 &&
                   beta <= std::min(1.0 / (4.0 * sigma), 1.0 / 3.0) + kBoundaryEps)) {
        range_violation = "beta > min{1/(4 sigma), 1/3}";
      }
      break;
    case FamilyKind::beta_adopt:
      c.alpha1 = c.alpha2 = 3.0 * (2.0 * beta - 1.0);
      c.delta = 0.0;
      c.lipschitz_L = 2.0;
      if (!(beta > 0.5 && beta <= 13.0 / 24.0 + kBoundaryEps)) {
        range_violation = "beta outside (1/2, 13/24]";
      }
      break;
    case FamilyKind::disc_adopt:
      // E F_j = beta (mu_j - <q, mu>) exactly, so matching the alpha/3 factor needs
      // alpha = 3 beta. Reporting alpha = beta would understate the rate threefold.
      c.alpha1 = c.alpha2 = 3.0 * beta;
      c.delta = 0.0;
      c.lipschitz_L = 2.0;
      if (!(beta > 0.0 && beta <= std::min(1.0 / 12.0, 1.0 / sigma) + kBoundaryEps)) {
        range_violation = "beta > min{1/12, 1/sigma}";
      }
      break;
    case FamilyKind::two_neighbor_softmax:
      c.valid = false;
      c.validity_reason = "no parameter certificate is derived for two-neighbor-softmax";
      return c;
  }

  if (!range_violation.empty()) {
    c.valid = false;
    c.validity_reason = format_reason(range_violation, c);
  } else if (auto why = assumption_violation(c); !why.empty()) {
    c.valid = false;
    c.validity_reason = format_reason(why, c);
  } else {
    c.valid = true;
    c.validity_reason = format_reason("ok", c);
  }
  if (family.kind() == FamilyKind::disc_adopt) {
    std::ostringstream os;
    os << c.validity_reason << "; alpha = 3 beta = " << 3.0 * beta
       << " (not alpha = beta = " << beta << ")";
    c.validity_reason = os.str();
  }
  return c;
}

LinearizationReport verify_exp_linearization(double beta, int grid_points) {
  if (!(beta > 0.0 && beta <= 0.25)) {
    throw Error(ErrorKind::invalid_parameter, "exp linearization needs 0 < beta <= 1/4");
  }
  if (grid_points < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 grid points");

  LinearizationReport r;
  r.lower_slack = r.upper_slack = std::numeric_limits<double>::infinity();
  const double step = 20.0 / (grid_points - 1);
  const double lower_coef = (0.5 - 2.0 * beta) * beta;
  const double upper_coef = 0.5 * beta;
  for (int i = 0; i < grid_points; ++i) {
    const double x = -10.0 + step * i;
    for (int k = 0; k < grid_points; ++k) {
      const double y = -10.0 + step * k;
      const double gap = std::abs(x - y);
      const double mid = std::abs(std::tanh(0.5 * beta * (x - y)));
      const double lo = mid - lower_coef * gap;
      const double hi = upper_coef * gap - mid;
      if (lo < r.lower_slack) {
        r.lower_slack = lo;
        r.worst_lower_x = x;
        r.worst_lower_y = y;
      }
      if (hi < r.upper_slack) {
        r.upper_slack = hi;
        r.worst_upper_x = x;
        r.worst_upper_y = y;
      }
      ++r.points;
    }
  }
  return r;
}

LinearizationReport verify_sigmoid_linearization(double beta, int grid_points) {
  if (!(beta > 0.0 && beta <= 0.25)) {
    throw Error(ErrorKind::invalid_parameter, "sigmoid linearization needs 0 < beta <= 1/4");
  }
  if (grid_points < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 grid points");

  LinearizationReport r;
  r.lower_slack = r.upper_slack = std::numeric_limits<double>::infinity();
  const double shallow = beta / 4.0 - beta * beta;
  const double steep = beta / 4.0;

  auto check = [&](double x) {
    const double s = 1.0 / (1.0 + std::exp(-beta * x));
    const double shallow_line = 0.5 + shallow * x;
    const double steep_line = 0.5 + steep * x;
    // For x >= 0 the shallow line is below and the steep line above; mirrored for x < 0.
    const double lo = x >= 0.0 ? s - shallow_line : shallow_line - s;
    const double hi = x >= 0.0 ? steep_line - s : s - steep_line;
    if (lo < r.lower_slack) {
      r.lower_slack = lo;
      r.worst_lower_x = x;
    }
    if (hi < r.upper_slack) {
      r.upper_slack = hi;
      r.worst_upper_x = x;
    }
    ++r.points;
  };

  for (int i = 0; i < grid_points; ++i) check(10.0 * i / (grid_points - 1));
  for (int i = 0; i < grid_points; ++i) check(-10.0 + 10.0 * i / grid_points);
  return r;
}

}  // namespace gossip
