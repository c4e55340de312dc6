// Command-line front end: run, eval and validate experiment configs.

#include "pcnsm/harness.hpp"
#include "pcnsm/history_io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void print_summary(const pcnsm::RunResult &result, const std::filesystem::path &out) {
  std::size_t reached = 0;
  for (const auto &tr : result.metrics.trials)
    reached += tr.reached ? 1 : 0;
  std::cout << "actions: " << result.metrics.steps.size()
            << "  trials: " << result.metrics.trials.size() << "  reached: " << reached
            << "\noutput: " << out.string() << '\n';
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"PC-NSM instance-based reinforcement learning experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string history_path;

  auto *run_cmd = app.add_subcommand("run", "Train an agent and write metrics");
  run_cmd->add_option("--config", config_path, "Run configuration file")->required();
  run_cmd->add_option("--seed", seed, "Override the configured seed");
  run_cmd->add_option("--out", out_dir, "Override the output directory");

  auto *eval_cmd = app.add_subcommand("eval", "Run a frozen policy from a saved history");
  eval_cmd->add_option("--config", config_path, "Run configuration file")->required();
  eval_cmd->add_option("--history", history_path, "History file from a previous run")
      ->required();
  eval_cmd->add_option("--seed", seed, "Override the configured seed");
  eval_cmd->add_option("--out", out_dir, "Override the output directory");

  auto *validate_cmd = app.add_subcommand("validate", "Parse a configuration and exit");
  validate_cmd->add_option("--config", config_path, "Run configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  pcnsm::RunConfig config;
  try {
    config = pcnsm::load_run_config(config_path);
    if (seed)
      config.agent.seed = *seed;
    if (!out_dir.empty())
      config.output_dir = out_dir;
    if (eval_cmd->parsed())
      config.eval_mode = true;
    auto env = pcnsm::make_environment(config);
    pcnsm::make_metric(config, env->descriptor());
  } catch (const pcnsm::ConfigError &e) {
    std::cerr << "pcnsm: " << e.what() << '\n';
    return kExitConfig;
  }

  if (validate_cmd->parsed()) {
    std::cout << "config ok: " << config_path << '\n';
    return kExitOk;
  }

  try {
    std::optional<pcnsm::History> initial;
    if (eval_cmd->parsed()) {
      auto stored = pcnsm::load_history(history_path);
      if (stored.action_count != pcnsm::make_environment(config)->descriptor().action_count)
        throw std::runtime_error("history action count does not match the environment");
      initial = std::move(stored.history);
    }
    const auto result = pcnsm::run(config, std::move(initial));
    print_summary(result, config.output_dir);
  } catch (const pcnsm::ConfigError &e) {
    std::cerr << "pcnsm: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "pcnsm: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
