#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gossip/config.hpp"

namespace gossip {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

/// Header of the per-seed CSV for m arms.
std::string run_csv_header(int m);

/// Result of one seeded replication of a cell.
struct SeedOutcome {
  std::string run_id;
  std::uint64_t seed = 0;
  double avg_regret = 0.0;  // R(T) / T
  std::optional<double> coupling_sum;
  std::optional<double> convex_err;
  std::string csv;  // full per-round CSV text
};

SeedOutcome execute_seed(const RunConfig& cfg, std::uint64_t seed);

inline const std::string kSummaryHeader =
    "config_hash,n,m,T,beta,algorithm,mean_avg_regret,q1,q3,mean_coupling_sum,mean_convex_err";

/// Worker count: GOSSIP_BANDITS_THREADS when set to a positive integer, else
/// the hardware concurrency, never more than `jobs`.
unsigned worker_count(std::size_t jobs);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gossip
