#include "gossip/config.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gossip/error.hpp"

namespace gossip {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "n",        "m",          "T",         "tau",            "seed",           "seeds",
    "algorithm", "beta",      "sigma",     "mode",           "couple",         "output",
    "reward",   "means",      "means_range", "schedule",     "noise_halfwidth", "noise_sd",
    "clip",     "G",          "convex_preset", "convex_quadratic", "convex_linear",
    "convex_constant", "grid"};

constexpr std::array<const char*, 5> kGridAxes = {"n", "m", "T", "beta", "sigma"};

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::invalid_input, what);
}

const json& require(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) config_error(std::string("missing required key \"") + key + "\"");
  return *it;
}

template <class T>
T get_as(const json& value, const char* key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    config_error(std::string("key \"") + key + "\" has the wrong type: " + value.dump());
  }
}

std::int64_t get_int(const json& value, const char* key) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (x == static_cast<double>(static_cast<std::int64_t>(x))) return static_cast<std::int64_t>(x);
  }
  config_error(std::string("key \"") + key + "\" must be an integer, got " + value.dump());
}

double get_double(const json& value, const char* key) {
  if (!value.is_number()) {
    config_error(std::string("key \"") + key + "\" must be a number, got " + value.dump());
  }
  return value.get<double>();
}

double optional_double(const json& doc, const char* key, double fallback) {
  const auto it = doc.find(key);
  return it == doc.end() ? fallback : get_double(*it, key);
}

std::vector<double> get_vector(const json& value, const char* key) {
  if (!value.is_array()) config_error(std::string("key \"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& x : value) out.push_back(get_double(x, key));
  return out;
}

MeanVector resolve_means(const json& doc, int m, MeanRange range) {
  if (doc.contains("means")) {
    auto means = get_vector(doc["means"], "means");
    if (static_cast<int>(means.size()) != m) {
      config_error("\"means\" has " + std::to_string(means.size()) + " entries but m=" +
                   std::to_string(m));
    }
    return MeanVector(std::move(means), range);
  }
  if (doc.contains("means_range")) {
    json spec = doc["means_range"];
    if (spec.is_object()) {
      const auto key = std::to_string(m);
      if (!spec.contains(key)) config_error("\"means_range\" has no entry for m=" + key);
      spec = spec[key];
    }
    const auto ends = get_vector(spec, "means_range");
    if (ends.size() != 2) config_error("\"means_range\" must be [high, low]");
    const auto spaced = evenly_spaced_means(m, ends[0], ends[1]);
    return MeanVector(std::vector<double>(spaced.values().begin(), spaced.values().end()), range);
  }
  config_error("missing required key \"means\" (or \"means_range\")");
}

ConvexFunctionSpec resolve_convex(const json& doc) {
  if (doc.contains("convex_preset")) {
    const auto name = get_as<std::string>(doc["convex_preset"], "convex_preset");
    if (name != "benchmark") config_error("unknown convex_preset \"" + name + "\"");
    return ConvexFunctionSpec::benchmark();
  }
  ConvexFunctionSpec fn;
  fn.quadratic = get_vector(require(doc, "convex_quadratic"), "convex_quadratic");
  fn.linear = get_vector(require(doc, "convex_linear"), "convex_linear");
  fn.constant = optional_double(doc, "convex_constant", 0.0);
  fn.validate();
  return fn;
}

}  // namespace

PotentialFamily RunConfig::family() const {
  return PotentialFamily::from_name(algorithm, beta, sigma);
}

std::optional<ConvexFunctionSpec> RunConfig::convex() const {
  if (source.value("reward", std::string()) != "gradient") return std::nullopt;
  return resolve_convex(source);
}

RewardModel RunConfig::reward_model() const {
  const auto kind = get_as<std::string>(require(source, "reward"), "reward");
  if (kind == "bernoulli") {
    return RewardModel::stationary_bernoulli(resolve_means(source, m, MeanRange::stationary));
  }
  if (kind == "scaled-bernoulli") {
    return RewardModel::scaled_bernoulli(resolve_means(source, m, MeanRange::stationary), sigma);
  }
  const double halfwidth = optional_double(source, "noise_halfwidth", 0.0);
  if (kind == "adversarial") {
    const auto& rows = require(source, "schedule");
    if (!rows.is_array()) config_error("key \"schedule\" must be an array of mean vectors");
    std::vector<MeanVector> schedule;
    for (const auto& row : rows) schedule.emplace_back(get_vector(row, "schedule"));
    return RewardModel::adversarial(std::move(schedule), halfwidth, sigma);
  }
  if (kind == "leader-punishing") return RewardModel::leader_punishing(m, halfwidth, sigma);
  if (kind == "gradient") {
    auto fn = resolve_convex(source);
    const double G = optional_double(source, "G", gradient_bound(fn));
    return RewardModel::gradient_oracle(std::move(fn), G, optional_double(source, "noise_sd", 0.0),
                                        optional_double(source, "clip", 10.0));
  }
  config_error("unknown reward kind \"" + kind + "\"");
}

std::string RunConfig::hash() const {
  json canonical = source;
  canonical.erase("output");
  canonical.erase("grid");
  const std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("cannot parse " + path + ": " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    config_error("override \"" + assignment + "\" is not of the form key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) config_error("override path \"" + path + "\" has an empty component");
    if (!node->is_object()) config_error("override path \"" + path + "\" walks into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

RunConfig resolve_config(const json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.contains(key)) config_error("unknown key \"" + key + "\"");
  }

  RunConfig cfg;
  cfg.source = doc;
  cfg.n = get_int(require(doc, "n"), "n");
  const auto m = get_int(require(doc, "m"), "m");
  const auto T = get_int(require(doc, "T"), "T");
  if (cfg.n < 1) config_error("\"n\" must be at least 1");
  if (m < 2 || m > 100000) config_error("\"m\" must lie in [2, 100000]");
  if (T < 0 || T > 100000000) config_error("\"T\" must lie in [0, 10^8]");
  cfg.m = static_cast<int>(m);
  cfg.T = static_cast<int>(T);
  cfg.algorithm = get_as<std::string>(require(doc, "algorithm"), "algorithm");
  cfg.beta = get_double(require(doc, "beta"), "beta");
  cfg.sigma = optional_double(doc, "sigma", 1.0);

  const auto tau = doc.contains("tau") ? get_int(doc["tau"], "tau") : std::int64_t{cfg.T};
  cfg.tau = static_cast<int>(tau);
  const auto seed = doc.contains("seed") ? get_int(doc["seed"], "seed") : std::int64_t{1};
  if (seed < 0) config_error("\"seed\" must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  const auto seeds = doc.contains("seeds") ? get_int(doc["seeds"], "seeds") : std::int64_t{1};
  if (seeds < 1 || seeds > 1000000) config_error("\"seeds\" must lie in [1, 10^6]");
  cfg.seeds = static_cast<int>(seeds);
  cfg.couple = doc.contains("couple") ? get_as<bool>(doc["couple"], "couple") : false;
  cfg.output = doc.contains("output") ? get_as<std::string>(doc["output"], "output") : "out";
  const auto mode = doc.contains("mode") ? get_as<std::string>(doc["mode"], "mode") : "auto";
  cfg.mode = parse_step_mode(mode, cfg.n);

  if (cfg.couple) {
    if (cfg.tau < 1) config_error("\"tau\" must be at least 1 when couple=true");
    if (cfg.T % cfg.tau != 0) {
      throw Error(ErrorKind::invalid_epoching, "T=" + std::to_string(cfg.T) +
                                                   " is not a multiple of tau=" +
                                                   std::to_string(cfg.tau));
    }
  }

  // Build everything once so bad parameters surface as configuration errors.
  (void)cfg.family();
  const auto model = cfg.reward_model();
  validate(cfg.params(), model);
  return cfg;
}

std::vector<json> expand_grid(const json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  const auto it = doc.find("grid");
  if (it == doc.end()) return {doc};
  const json& grid = *it;
  if (!grid.is_object()) config_error("\"grid\" must be an object of axis arrays");

  json base = doc;
  base.erase("grid");
  std::vector<std::pair<std::string, json>> axes;
  for (const auto& [key, values] : grid.items()) {
    if (std::find(kGridAxes.begin(), kGridAxes.end(), key) == kGridAxes.end()) {
      config_error("unsupported grid axis \"" + key + "\"");
    }
  }
  for (const char* axis : kGridAxes) {
    if (!grid.contains(axis)) continue;
    const json& values = grid[axis];
    if (!values.is_array()) config_error(std::string("grid axis \"") + axis + "\" must be an array");
    if (values.empty()) config_error(std::string("grid axis \"") + axis + "\" is empty");
    axes.emplace_back(axis, values);
  }

  std::vector<json> cells{base};
  for (const auto& [axis, values] : axes) {
    std::vector<json> next;
    for (const auto& cell : cells) {
      for (const auto& v : values) {
        json c = cell;
        c[axis] = v;
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

}  // namespace gossip
