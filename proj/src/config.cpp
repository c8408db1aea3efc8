#include "metaes/config.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace metaes::cli {
namespace {

std::string where(const std::string& source, const YAML::Mark& mark) {
  if (mark.is_null()) return source;
  return source + ":" + std::to_string(mark.line + 1);
}

[[noreturn]] void fail(const std::string& source, const YAML::Node& node, const std::string& key,
                       const std::string& what) {
  throw ConfigError(where(source, node.Mark()) + ": key '" + key + "': " + what);
}

struct Reader {
  const std::string& source;
  const std::string& key;
  const YAML::Node& node;

  std::string scalar() const {
    if (!node.IsScalar()) fail(source, node, key, "expected a scalar value");
    return node.Scalar();
  }

  std::uint64_t uint() const {
    const std::string text = scalar();
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) {
      fail(source, node, key, "expected a non-negative integer, got '" + text + "'");
    }
    return value;
  }

  std::size_t count(std::size_t min) const {
    const std::uint64_t value = uint();
    if (value < min) fail(source, node, key, "must be at least " + std::to_string(min));
    return static_cast<std::size_t>(value);
  }

  double real() const {
    const std::string text = scalar();
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
      fail(source, node, key, "expected a finite number, got '" + text + "'");
    }
    return value;
  }

  double positive() const {
    const double value = real();
    if (!(value > 0.0)) fail(source, node, key, "must be positive");
    return value;
  }

  bool boolean() const {
    bool value = false;
    if (!YAML::convert<bool>::decode(node, value)) fail(source, node, key, "expected true or false");
    return value;
  }

  BudgetMode mode() const {
    const std::string text = scalar();
    if (text == "evaluations") return BudgetMode::max_evaluations;
    if (text == "generations") return BudgetMode::max_generations;
    if (text == "seconds") return BudgetMode::wall_clock_seconds;
    fail(source, node, key, "unknown budget mode '" + text + "' (evaluations, generations or seconds)");
  }

  bench::FunctionId function() const {
    const std::string text = scalar();
    if (auto id = bench::parse_function(text)) return *id;
    fail(source, node, key, "unknown function '" + text + "'");
  }

  Algorithm algorithm() const {
    const std::string text = scalar();
    if (auto a = parse_algorithm(text)) return *a;
    fail(source, node, key, "unknown algorithm '" + text + "' (lmcma_serial or dlmcma)");
  }
};

struct Partial {
  std::optional<std::size_t> ne_min;
  std::optional<std::size_t> ne_max;
  std::map<std::string, int> lines;  // key -> 1-based line
};

using Setter = std::function<void(const Reader&, RunConfig&, Partial&)>;

const std::map<std::string, Setter>& run_keys() {
  static const std::map<std::string, Setter> keys = {
      {"function", [](const Reader& r, RunConfig& c, Partial&) { c.function = r.function(); }},
      {"dimension", [](const Reader& r, RunConfig& c, Partial&) { c.dimension = r.count(2); }},
      {"seed", [](const Reader& r, RunConfig& c, Partial&) { c.seed = r.uint(); }},
      {"instance_seed", [](const Reader& r, RunConfig& c, Partial&) { c.instance_seed = r.uint(); }},
      {"algorithm", [](const Reader& r, RunConfig& c, Partial&) { c.algorithm = r.algorithm(); }},
      {"lambda_prime", [](const Reader& r, RunConfig& c, Partial&) { c.lambda_prime = r.count(2); }},
      {"mu_prime", [](const Reader& r, RunConfig& c, Partial&) { c.mu_prime = r.count(1); }},
      {"isolation_mode", [](const Reader& r, RunConfig& c, Partial&) { c.isolation.mode = r.mode(); }},
      {"isolation", [](const Reader& r, RunConfig& c, Partial&) { c.isolation.amount = r.positive(); }},
      {"budget_mode", [](const Reader& r, RunConfig& c, Partial&) { c.budget.mode = r.mode(); }},
      {"budget", [](const Reader& r, RunConfig& c, Partial&) { c.budget.amount = r.positive(); }},
      {"threshold", [](const Reader& r, RunConfig& c, Partial&) { c.threshold = r.real(); }},
      {"sigma0", [](const Reader& r, RunConfig& c, Partial&) { c.sigma0 = r.positive(); }},
      {"sigma_max", [](const Reader& r, RunConfig& c, Partial&) { c.sigma_max = r.positive(); }},
      {"ne_min", [](const Reader& r, RunConfig&, Partial& p) { p.ne_min = r.count(1); }},
      {"ne_max", [](const Reader& r, RunConfig&, Partial& p) { p.ne_max = r.count(1); }},
      {"init_lower", [](const Reader& r, RunConfig& c, Partial&) { c.init_box.lower = r.real(); }},
      {"init_upper", [](const Reader& r, RunConfig& c, Partial&) { c.init_box.upper = r.real(); }},
      {"pool_size", [](const Reader& r, RunConfig& c, Partial&) { c.pool_size = r.count(1); }},
      {"normalizer",
       [](const Reader& r, RunConfig& c, Partial&) {
         const std::string text = r.scalar();
         const auto parsed = meta::parse_normalizer(text);
         if (!parsed) fail(r.source, r.node, r.key, "unknown normalizer '" + text + "' (literal or variance)");
         c.normalizer = *parsed;
       }},
      {"stagnation_epochs", [](const Reader& r, RunConfig& c, Partial&) { c.stagnation_epochs = r.count(0); }},
      {"inner_lambda", [](const Reader& r, RunConfig& c, Partial&) { c.inner_lambda = r.count(2); }},
      {"reproducible", [](const Reader& r, RunConfig& c, Partial&) { c.reproducible = r.boolean(); }},
      {"outdir", [](const Reader& r, RunConfig& c, Partial&) { c.outdir = r.scalar(); }},
  };
  return keys;
}

YAML::Node parse_document(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(where(source, e.mark) + ": " + e.msg);
  }
  if (root.IsNull()) return YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError(source + ": expected a mapping of keys to values");
  return root;
}

void apply_key(const std::string& source, const std::string& key, const YAML::Node& value, RunConfig& cfg,
               Partial& partial) {
  const auto& keys = run_keys();
  const auto it = keys.find(key);
  if (it == keys.end()) fail(source, value, key, "unknown key");
  it->second(Reader{source, key, value}, cfg, partial);
  if (!value.Mark().is_null()) partial.lines[key] = value.Mark().line + 1;
}

void finish(RunConfig& cfg, const Partial& partial, const std::string& source) {
  if (partial.ne_min || partial.ne_max) {
    const meta::NeRange fallback = cfg.ne_range.value_or(exec::default_ne_range(cfg.dimension));
    cfg.ne_range = meta::NeRange{partial.ne_min.value_or(fallback.min), partial.ne_max.value_or(fallback.max)};
  }
  const auto at = [&](const std::string& key) {
    const auto it = partial.lines.find(key);
    return it == partial.lines.end() ? source : source + ":" + std::to_string(it->second);
  };
  const auto error = [&](const std::string& key, const std::string& what) {
    throw ConfigError(at(key) + ": key '" + key + "': " + what);
  };
  if (cfg.algorithm == Algorithm::dlmcma) {
    const std::size_t mu = cfg.mu_prime.value_or(meta::default_mu_prime(cfg.lambda_prime));
    if (mu >= cfg.lambda_prime) error(cfg.mu_prime ? "mu_prime" : "lambda_prime", "mu' must be smaller than lambda'");
  }
  if (!(cfg.init_box.lower < cfg.init_box.upper)) error("init_upper", "init_lower must be below init_upper");
  if (cfg.ne_range && cfg.ne_range->min > cfg.ne_range->max) error("ne_max", "ne_min must not exceed ne_max");
  const double sigma0 = cfg.sigma0.value_or(0.3 * (cfg.init_box.upper - cfg.init_box.lower));
  if (cfg.sigma_max && *cfg.sigma_max < sigma0) error("sigma_max", "sigma_max must be at least sigma0");
  if (cfg.reproducible) {
    if (cfg.budget.mode == BudgetMode::wall_clock_seconds) {
      error("budget_mode", "wall-clock budgets are not reproducible; set reproducible: false");
    }
    if (cfg.algorithm == Algorithm::dlmcma && cfg.isolation.mode == BudgetMode::wall_clock_seconds) {
      error("isolation_mode", "wall-clock isolation is not reproducible; set reproducible: false");
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot read file");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<YAML::Node> list_items(const std::string& source, const std::string& key, const YAML::Node& node) {
  if (!node.IsSequence()) fail(source, node, key, "expected a list");
  std::vector<YAML::Node> items(node.begin(), node.end());
  if (items.empty()) fail(source, node, key, "list must not be empty");
  return items;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::lmcma_serial ? "lmcma_serial" : "dlmcma";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) noexcept {
  if (text == "lmcma_serial") return Algorithm::lmcma_serial;
  if (text == "dlmcma") return Algorithm::dlmcma;
  return std::nullopt;
}

void apply_large_profile(RunConfig& cfg) {
  cfg.dimension = 2000;
  cfg.lambda_prime = 380;
  cfg.mu_prime.reset();
  cfg.isolation = {BudgetMode::wall_clock_seconds, 150.0};
  cfg.budget = {BudgetMode::wall_clock_seconds, 3.0 * 3600.0};
  cfg.reproducible = false;
}

RunConfig parse_run_config(const std::string& text, const std::string& source, RunConfig defaults) {
  const YAML::Node root = parse_document(text, source);
  Partial partial;
  for (const auto& item : root) apply_key(source, item.first.as<std::string>(), item.second, defaults, partial);
  finish(defaults, partial, source);
  return defaults;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig defaults) {
  return parse_run_config(read_file(path), path.string(), std::move(defaults));
}

SuiteConfig parse_suite_config(const std::string& text, const std::string& source, RunConfig defaults) {
  const YAML::Node root = parse_document(text, source);
  SuiteConfig suite;
  Partial partial;
  bool has_functions = false;
  for (const auto& item : root) {
    const std::string key = item.first.as<std::string>();
    const YAML::Node& value = item.second;
    if (key == "functions") {
      has_functions = true;
      for (const YAML::Node& f : list_items(source, key, value)) suite.functions.push_back(Reader{source, key, f}.function());
    } else if (key == "algorithms") {
      for (const YAML::Node& a : list_items(source, key, value)) {
        suite.algorithms.push_back(Reader{source, key, a}.algorithm());
      }
    } else if (key == "seeds") {
      if (value.IsScalar()) {
        const std::size_t count = Reader{source, key, value}.count(1);
        for (std::size_t s = 0; s < count; ++s) suite.seeds.push_back(s);
      } else {
        for (const YAML::Node& s : list_items(source, key, value)) suite.seeds.push_back(Reader{source, key, s}.uint());
      }
    } else if (key == "function" || key == "algorithm" || key == "seed") {
      fail(source, value, key, "not allowed in a suite; use the plural list key");
    } else {
      apply_key(source, key, value, defaults, partial);
    }
  }
  if (!has_functions) throw ConfigError(source + ": key 'functions': required");
  if (suite.algorithms.empty()) suite.algorithms = {Algorithm::lmcma_serial, Algorithm::dlmcma};
  if (suite.seeds.empty()) suite.seeds = {0};
  for (Algorithm algorithm : suite.algorithms) {
    RunConfig probe = defaults;
    probe.algorithm = algorithm;
    finish(probe, partial, source);
  }
  defaults.algorithm = suite.algorithms.front();
  finish(defaults, partial, source);
  suite.base = std::move(defaults);
  return suite;
}

SuiteConfig load_suite_config(const std::filesystem::path& path, RunConfig defaults) {
  return parse_suite_config(read_file(path), path.string(), std::move(defaults));
}

void validate(const RunConfig& cfg, const std::string& source) {
  RunConfig copy = cfg;
  finish(copy, Partial{}, source);
}

std::string canonical_json(const RunConfig& cfg) {
  const exec::MetaOptions meta = meta_options(cfg);
  nlohmann::json j;
  j["function"] = bench::name(cfg.function);
  j["dimension"] = cfg.dimension;
  j["seed"] = cfg.seed;
  j["instance_seed"] = cfg.objective_seed();
  j["algorithm"] = to_string(cfg.algorithm);
  j["budget_mode"] = to_string(cfg.budget.mode);
  j["budget"] = cfg.budget.amount;
  j["threshold"] = cfg.threshold;
  j["sigma0"] = *meta.sigma0;
  j["init_lower"] = cfg.init_box.lower;
  j["init_upper"] = cfg.init_box.upper;
  j["inner_lambda"] = cfg.inner_lambda;
  j["reproducible"] = cfg.reproducible;
  if (cfg.algorithm == Algorithm::dlmcma) {
    j["lambda_prime"] = cfg.lambda_prime;
    j["mu_prime"] = *meta.mu_prime;
    j["isolation_mode"] = to_string(cfg.isolation.mode);
    j["isolation"] = cfg.isolation.amount;
    j["sigma_max"] = *meta.sigma_max;
    j["ne_min"] = meta.ne_range->min;
    j["ne_max"] = meta.ne_range->max;
    j["pool_size"] = cfg.pool_size;
    j["normalizer"] = meta::to_string(cfg.normalizer);
    j["stagnation_epochs"] = cfg.stagnation_epochs;
  } else {
    j["ne"] = exec::default_ne(cfg.dimension);
  }
  return j.dump();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical_json(cfg)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

exec::MetaOptions meta_options(const RunConfig& cfg) {
  exec::MetaOptions o;
  o.lambda_prime = cfg.lambda_prime;
  o.mu_prime = cfg.mu_prime.value_or(meta::default_mu_prime(cfg.lambda_prime));
  o.isolation = cfg.isolation;
  o.total = cfg.budget;
  o.threshold = cfg.threshold;
  o.sigma0 = cfg.sigma0.value_or(0.3 * (cfg.init_box.upper - cfg.init_box.lower));
  o.sigma_max = cfg.sigma_max.value_or(2.0 * *o.sigma0);
  o.ne_range = cfg.ne_range.value_or(exec::default_ne_range(cfg.dimension));
  o.init_box = cfg.init_box;
  o.pool_size = cfg.pool_size;
  o.normalizer = cfg.normalizer;
  o.master_seed = cfg.seed;
  o.stagnation_epochs = cfg.stagnation_epochs;
  o.inner.lambda = cfg.inner_lambda;
  return o;
}

exec::SerialOptions serial_options(const RunConfig& cfg) {
  exec::SerialOptions o;
  o.total = cfg.budget;
  o.threshold = cfg.threshold;
  o.sigma0 = cfg.sigma0.value_or(0.3 * (cfg.init_box.upper - cfg.init_box.lower));
  o.init_box = cfg.init_box;
  o.master_seed = cfg.seed;
  o.ne = exec::default_ne(cfg.dimension);
  o.inner.lambda = cfg.inner_lambda;
  return o;
}

}  // namespace metaes::cli
