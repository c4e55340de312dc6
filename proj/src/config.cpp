#include "pcnsm/config.hpp"

#include "pcnsm/arena.hpp"
#include "pcnsm/maze.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace pcnsm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class LineParser {
public:
  LineParser(std::size_t line, std::string key, std::string value)
      : line_(line), key_(std::move(key)), value_(std::move(value)) {}

  [[noreturn]] void fail(const std::string &what) const {
    throw ConfigError("config: line " + std::to_string(line_) + ": " + key_ + ": " + what);
  }

  double real_in(double lo, double hi, bool hi_open) const {
    const double v = real();
    if (v < lo || v > hi || (hi_open && v == hi))
      fail("must lie in [" + value_text(lo) + ", " + value_text(hi) + (hi_open ? ")" : "]"));
    return v;
  }

  double real() const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value_.data(), value_.data() + value_.size(), v);
    if (ec != std::errc() || ptr != value_.data() + value_.size() || !std::isfinite(v))
      fail("expected a real number, got '" + value_ + "'");
    return v;
  }

  template <typename Int> Int integer() const {
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(value_.data(), value_.data() + value_.size(), v);
    if (ec != std::errc() || ptr != value_.data() + value_.size())
      fail("expected a nonnegative integer, got '" + value_ + "'");
    return v;
  }

  bool boolean() const {
    if (value_ == "true" || value_ == "1" || value_ == "on")
      return true;
    if (value_ == "false" || value_ == "0" || value_ == "off")
      return false;
    fail("expected true or false, got '" + value_ + "'");
  }

  const std::string &text() const { return value_; }

private:
  static std::string value_text(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }

public:

private:
  std::size_t line_;
  std::string key_;
  std::string value_;
};

} // namespace

void RunConfig::validate() const {
  try {
    agent.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (trials == 0)
    throw ConfigError("config: trials must be positive");
  if (env == EnvKind::maze && scenario.empty())
    throw ConfigError("config: maze runs need a scenario map file");
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path &base_dir) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string l = trim(raw);
    if (l.empty())
      continue;
    const auto eq = l.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(std::string_view(l).substr(0, eq));
    const LineParser v(line, key, trim(std::string_view(l).substr(eq + 1)));
    if (!seen.insert(key).second)
      v.fail("duplicate key");

    if (key == "env") {
      if (v.text() == "arena")
        cfg.env = EnvKind::arena;
      else if (v.text() == "maze")
        cfg.env = EnvKind::maze;
      else
        v.fail("expected arena or maze");
    } else if (key == "scenario") {
      std::filesystem::path p = v.text();
      cfg.scenario = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (key == "metric") {
      if (v.text() == "discounted")
        cfg.metric = MetricKind::discounted;
      else if (v.text() == "match_length")
        cfg.metric = MetricKind::match_length;
      else
        v.fail("expected discounted or match_length");
    } else if (key == "k") {
      cfg.agent.k = v.integer<std::size_t>();
      if (cfg.agent.k == 0)
        v.fail("must be positive");
    } else if (key == "epsilon")
      cfg.agent.epsilon = v.real_in(0.0, 1.0, false);
    else if (key == "gamma")
      cfg.agent.gamma = v.real_in(0.0, 1.0, true);
    else if (key == "beta")
      cfg.agent.beta = v.real_in(0.0, 1.0, false);
    else if (key == "lambda")
      cfg.agent.lambda = v.real_in(0.0, 1.0, true);
    else if (key == "endo_updates")
      cfg.agent.endo_updates_per_step = v.integer<std::size_t>();
    else if (key == "truncation_tol") {
      cfg.agent.truncation_tol = v.real();
      if (cfg.agent.truncation_tol <= 0.0)
        v.fail("must be positive");
    } else if (key == "seed")
      cfg.agent.seed = v.integer<std::uint64_t>();
    else if (key == "exogenous_updates")
      cfg.agent.exogenous_updates = v.boolean();
    else if (key == "trials") {
      cfg.trials = v.integer<std::size_t>();
      if (cfg.trials == 0)
        v.fail("must be positive");
    } else if (key == "max_actions")
      cfg.max_actions = v.integer<std::size_t>();
    else if (key == "output_dir") {
      std::filesystem::path p = v.text();
      cfg.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (key == "eval_mode")
      cfg.eval_mode = v.boolean();
    else if (key == "policy") {
      if (v.text() == "pcnsm")
        cfg.random_policy = false;
      else if (v.text() == "random")
        cfg.random_policy = true;
      else
        v.fail("expected pcnsm or random");
    } else
      v.fail("unknown key");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

std::unique_ptr<Environment> make_environment(const RunConfig &config) {
  try {
    if (config.env == EnvKind::maze)
      return std::make_unique<MazeEnvironment>(MazeMap::load(config.scenario));
    if (config.scenario.empty())
      return std::make_unique<ArenaEnvironment>(default_arena_scenario());
    return std::make_unique<ArenaEnvironment>(ArenaScenario::load(config.scenario));
  } catch (const std::exception &e) {
    throw ConfigError(e.what());
  }
}

MetricSpec make_metric(const RunConfig &config, const EnvDescriptor &env) {
  try {
    if (config.metric == MetricKind::match_length)
      return make_match_length_metric();
    return make_discounted_metric(config.agent.lambda, env.obs_scale_bound,
                                  config.agent.truncation_tol);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

} // namespace pcnsm
