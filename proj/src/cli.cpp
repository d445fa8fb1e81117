#include "gossip/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gossip/error.hpp"
#include "gossip/metrics.hpp"
#include "gossip/mwu.hpp"
#include "gossip/verify.hpp"

namespace gossip {

namespace fs = std::filesystem;

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string run_csv_header(int m) {
  std::string h = "run_id,seed,t";
  for (int j = 0; j < m; ++j) h += ",p_" + std::to_string(j);
  for (int j = 0; j < m; ++j) h += ",q_" + std::to_string(j);
  h += ",reward_dot_p,inst_regret,cum_regret,l1_pq";
  return h;
}

SeedOutcome execute_seed(const RunConfig& cfg, std::uint64_t seed) {
  const auto family = cfg.family();
  const auto model = cfg.reward_model();

  std::optional<CoupledTrajectory> coupled;
  TrajectoryRecord run;
  if (cfg.couple) {
    coupled = run_coupled(cfg.params(), model, family, cfg.tau, seed);
    run = coupled->run;
  } else {
    run = run_trajectory(cfg.params(), model, family, seed);
  }
  const auto regret = population_regret(run);

  SeedOutcome out;
  out.seed = seed;
  out.run_id = cfg.hash() + "-" + std::to_string(seed);
  out.avg_regret = cfg.T > 0 ? regret.cumulative / cfg.T : 0.0;
  if (coupled) out.coupling_sum = coupling_error_sum(*coupled);
  if (auto fn = cfg.convex(); fn && cfg.T > 0) out.convex_err = convex_error(run, *fn);

  std::string csv = run_csv_header(cfg.m);
  csv += '\n';
  const auto m = static_cast<std::size_t>(cfg.m);
  double cum = 0.0;
  for (int t = 0; t <= cfg.T; ++t) {
    const auto k = static_cast<std::size_t>(t);
    csv += out.run_id + ',' + std::to_string(seed) + ',' + std::to_string(t);
    for (std::size_t j = 0; j < m; ++j) csv += ',' + format_number(run.p[k][j]);
    for (std::size_t j = 0; j < m; ++j) {
      csv += ',';
      if (coupled) csv += format_number(coupled->q[k][j]);
    }
    csv += ',';
    if (t < cfg.T) csv += format_number(dot(run.p[k].masses(), run.g[k].values()));
    csv += ',';
    if (t < cfg.T) csv += format_number(regret.per_round[k]);
    csv += ',' + format_number(cum);
    csv += ',';
    if (coupled) csv += format_number(coupled->l1[k]);
    csv += '\n';
    if (t < cfg.T) cum += regret.per_round[k];
  }
  out.csv = std::move(csv);
  return out;
}

unsigned worker_count(std::size_t jobs) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GOSSIP_BANDITS_THREADS")) {
    unsigned v = 0;
    const auto* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, v);
    if (res.ec == std::errc() && res.ptr == end && v > 0) cap = v;
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(cap, jobs)));
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_atomically(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::invalid_input, "cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw Error(ErrorKind::invalid_input, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct ExperimentOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
};

std::vector<RunConfig> load_cells(const ExperimentOptions& opts, bool allow_grid) {
  nlohmann::json doc = opts.config_path.empty() ? nlohmann::json::object()
                                                : load_config_file(opts.config_path);
  for (const auto& o : opts.overrides) apply_override(doc, o);
  if (!opts.output.empty()) doc["output"] = opts.output;
  if (!allow_grid && doc.contains("grid")) {
    throw Error(ErrorKind::invalid_input, "\"grid\" is only accepted by the sweep command");
  }
  std::vector<RunConfig> cells;
  for (const auto& cell : expand_grid(doc)) cells.push_back(resolve_config(cell));
  return cells;
}

int run_experiments(const std::vector<RunConfig>& cells, std::ostream& out, std::ostream& err) {
  struct Job {
    std::size_t cell;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int s = 0; s < cells[c].seeds; ++s) {
      jobs.push_back({c, cells[c].seed + static_cast<std::uint64_t>(s)});
    }
  }
  for (const auto& cfg : cells) fs::create_directories(cfg.output);

  std::vector<SeedOutcome> results(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const auto& cfg = cells[jobs[i].cell];
        results[i] = execute_seed(cfg, jobs[i].seed);
        write_atomically(fs::path(cfg.output) / (results[i].run_id + ".csv"), results[i].csv);
        results[i].csv.clear();
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned threads = worker_count(jobs.size());
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      err << "error: seed " << jobs[i].seed << ": " << e.what() << '\n';
    }
    return kExitFailure;
  }

  // One summary file per output directory, rows in cell order.
  std::vector<std::pair<std::string, std::string>> summaries;
  std::size_t offset = 0;
  for (const auto& cfg : cells) {
    std::vector<double> regrets;
    std::vector<double> coupling;
    std::vector<double> convex;
    for (int s = 0; s < cfg.seeds; ++s) {
      const auto& r = results[offset + static_cast<std::size_t>(s)];
      regrets.push_back(r.avg_regret);
      if (r.coupling_sum) coupling.push_back(*r.coupling_sum);
      if (r.convex_err) convex.push_back(*r.convex_err);
    }
    offset += static_cast<std::size_t>(cfg.seeds);
    const auto stats = summarize(regrets);
    std::string row = cfg.hash() + ',' + std::to_string(cfg.n) + ',' + std::to_string(cfg.m) +
                      ',' + std::to_string(cfg.T) + ',' + format_number(cfg.beta) + ',' +
                      cfg.algorithm + ',' + format_number(stats.mean) + ',' +
                      format_number(stats.q1) + ',' + format_number(stats.q3) + ',';
    if (!coupling.empty()) row += format_number(summarize(coupling).mean);
    row += ',';
    if (!convex.empty()) row += format_number(summarize(convex).mean);

    auto it = std::find_if(summaries.begin(), summaries.end(),
                           [&](const auto& s) { return s.first == cfg.output; });
    if (it == summaries.end()) {
      summaries.emplace_back(cfg.output, kSummaryHeader + '\n');
      it = summaries.end() - 1;
    }
    it->second += row + '\n';
    out << cfg.algorithm << " n=" << cfg.n << " m=" << cfg.m << " T=" << cfg.T
        << " beta=" << format_number(cfg.beta) << " seeds=" << cfg.seeds
        << " mean R(T)/T=" << format_number(stats.mean) << '\n';
  }
  for (const auto& [dir, text] : summaries) {
    write_atomically(fs::path(dir) / "summary.csv", text);
    out << "wrote " << (fs::path(dir) / "summary.csv").string() << '\n';
  }
  return kExitOk;
}

std::string g6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct BoundOptions {
  double alpha1 = 0.0;
  std::optional<double> alpha2;
  double delta = 0.0;
  std::optional<double> rho;
  double gamma = 0.0;
  int T = 1000;
  std::optional<double> n;
  std::optional<int> m;
  std::optional<int> tau;
  double L = 2.0;
  double c = 1.0;
  double sigma = 1.0;
};

int print_bounds(const BoundOptions& o, std::ostream& out) {
  BoundInputs in;
  in.alpha1 = o.alpha1;
  in.alpha2 = o.alpha2.value_or(o.alpha1);
  in.delta = o.delta;
  in.gamma = o.gamma;
  in.T = o.T;
  if (o.rho) {
    in.rho = *o.rho;
  } else if (o.m) {
    in.rho = 1.0 / *o.m;
  } else {
    throw UsageError("--rho is required unless --m is given (rho defaults to 1/m)");
  }
  if (in.alpha1 > in.alpha2) throw UsageError("alpha1 must not exceed alpha2");

  // Validate everything before printing anything.
  in.stationary = false;
  const double adversarial = mwu_regret_bound(in);
  std::optional<double> stationary;
  if (in.delta == 0.0) {
    in.stationary = true;
    stationary = mwu_regret_bound(in);
  }
  std::optional<int> horizon;
  if (o.n && o.m) horizon = mass_survival_horizon(*o.n, *o.m);
  std::optional<EpochBound> epoch;
  if (o.tau) {
    if (!o.n || !o.m) throw UsageError("--tau needs --n and --m");
    if (*o.tau < 1 || o.T % *o.tau != 0) throw UsageError("--T must be a positive multiple of --tau");
    ParameterCertificate cert{in.alpha1, in.alpha2, in.delta, o.L, true, ""};
    const std::vector<double> floors(static_cast<std::size_t>(o.T / *o.tau), in.rho);
    epoch = epoch_regret_bound(cert, floors, *o.tau, o.sigma, *o.m, *o.n, o.c, in.gamma,
                               in.delta == 0.0);
  }

  out << "stationary_bound " << (stationary ? g6(*stationary) : "n/a (needs delta = 0)") << '\n';
  out << "adversarial_bound " << g6(adversarial) << '\n';
  if (horizon) out << "mass_survival_horizon " << *horizon << '\n';
  if (epoch) {
    out << "coupling_bound " << g6(epoch->coupling) << '\n';
    out << "epoch_bound " << g6(epoch->total) << '\n';
  }
  return kExitOk;
}

int run_verify(VerifyOptions opts, std::ostream& out) {
  bool all = true;
  for (const auto& r : run_verification(opts)) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " measured=" << g6(r.measured)
        << " threshold=" << g6(r.threshold) << " (" << r.detail << ")\n";
  }
  return all ? kExitOk : kExitFailure;
}

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON config file");
  cmd->add_option("-s,--set", o.overrides, "Override a config key, e.g. --set beta=0.5")
      ->allow_extra_args(false);
  cmd->add_option("-o,--output", o.output, "Output directory (overrides \"output\")");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gossip-model multi-agent bandit simulator", "gossip_bandits"};
  app.require_subcommand(1);

  ExperimentOptions run_opts;
  auto* run = app.add_subcommand("run", "Run one configuration for every seed");
  add_experiment_options(run, run_opts);

  ExperimentOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Run the Cartesian product of the config's grid axes");
  add_experiment_options(sweep, sweep_opts);

  VerifyOptions verify_opts;
  std::string tier = "quick";
  auto* verify = app.add_subcommand("verify", "Run the invariant checks");
  verify->add_option("--tier", tier, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", verify_opts.seed, "Master seed of the checks");
  verify->add_flag("--flip-potential-sign", verify_opts.flip_potential_sign,
                   "Negate F_0 in the algebraic checks (mutation canary)");

  BoundOptions bound_opts;
  auto* bound = app.add_subcommand("bound", "Print the closed-form regret bounds");
  bound->add_option("--alpha1", bound_opts.alpha1, "alpha_1")->required();
  bound->add_option("--alpha2", bound_opts.alpha2, "alpha_2 (default alpha_1)");
  bound->add_option("--delta", bound_opts.delta, "delta (default 0)");
  bound->add_option("--rho", bound_opts.rho, "Initial mass floor (default 1/m)");
  bound->add_option("--gamma", bound_opts.gamma, "Failure probability term (default 0)");
  bound->add_option("--T", bound_opts.T, "Horizon for the adversarial bound (default 1000)");
  bound->add_option("--n", bound_opts.n, "Population size");
  bound->add_option("--m", bound_opts.m, "Number of arms");
  bound->add_option("--tau", bound_opts.tau, "Epoch length; enables the epoch bound");
  bound->add_option("--L", bound_opts.L, "Lipschitz constant (default 2)");
  bound->add_option("--c", bound_opts.c, "Concentration exponent (default 1)");
  bound->add_option("--sigma", bound_opts.sigma, "Reward support bound (default 1)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  if (verify->parsed()) {
    verify_opts.tier = parse_verify_tier(tier);
    return run_verify(verify_opts, out);
  }
  if (bound->parsed()) {
    try {
      return print_bounds(bound_opts, out);
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << '\n';
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
  }

  const bool is_sweep = sweep->parsed();
  std::vector<RunConfig> cells;
  try {
    cells = load_cells(is_sweep ? sweep_opts : run_opts, is_sweep);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    return run_experiments(cells, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace gossip
