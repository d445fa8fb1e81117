#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gossip/population.hpp"
#include "gossip/potentials.hpp"
#include "gossip/rewards.hpp"

namespace gossip {

/// Fully resolved parameters of one experiment cell.
struct RunConfig {
  std::int64_t n = 0;
  int m = 0;
  int T = 0;
  int tau = 0;  // defaults to T
  std::uint64_t seed = 1;
  int seeds = 1;
  std::string algorithm;
  double beta = 0.0;
  double sigma = 1.0;
  StepMode mode = StepMode::aggregate;
  bool couple = false;
  std::string output = "out";
  nlohmann::json source;  // the cell's JSON, used for hashing and rebuilding the reward model

  PotentialFamily family() const;
  RewardModel reward_model() const;
  SimulationParams params() const { return SimulationParams{n, m, T, mode}; }
  /// Present only for gradient-oracle rewards.
  std::optional<ConvexFunctionSpec> convex() const;
  /// 16 hex digits of FNV-1a over the canonical JSON of the cell (output path excluded).
  std::string hash() const;
};

/// Reads a JSON document; throws Error(invalid_input) on I/O or syntax errors.
nlohmann::json load_config_file(const std::string& path);

/// Applies "a.b.c=value" overrides. Values parse as JSON when they can and as
/// plain strings otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates a single-cell document and resolves defaults. A missing required
/// key raises Error(invalid_input) whose message names the key.
RunConfig resolve_config(const nlohmann::json& doc);

/// Expands the "grid" object (axes n, m, beta, sigma, T) into one document per
/// cell in row-major order of the axes as listed. Without a grid, returns {doc}.
std::vector<nlohmann::json> expand_grid(const nlohmann::json& doc);

}  // namespace gossip
