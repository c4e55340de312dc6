#pragma once

#include "pcnsm/core.hpp"
#include "pcnsm/envsim.hpp"
#include "pcnsm/metric.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string_view>

namespace pcnsm {

/// Raised for anything wrong with a configuration or the files it names.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class EnvKind { arena, maze };

struct RunConfig {
  AgentConfig agent;
  MetricKind metric = MetricKind::discounted;
  EnvKind env = EnvKind::arena;
  std::filesystem::path scenario; // empty: built-in arena defaults
  std::size_t trials = 100;
  std::size_t max_actions = 3000;
  std::filesystem::path output_dir = "out";
  bool eval_mode = false;    // epsilon forced to 0, q-values frozen
  bool random_policy = false; // uniform random actions, learner still updates

  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, repeated
/// keys and bad values raise ConfigError with the line number. Relative
/// scenario paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view text,
                           const std::filesystem::path &base_dir = {});
RunConfig load_run_config(const std::filesystem::path &path);

/// Builds the environment a config names. Throws ConfigError when the
/// scenario is missing or malformed.
std::unique_ptr<Environment> make_environment(const RunConfig &config);

/// Metric matching the config's kind and the environment's observation scale.
MetricSpec make_metric(const RunConfig &config, const EnvDescriptor &env);

} // namespace pcnsm
