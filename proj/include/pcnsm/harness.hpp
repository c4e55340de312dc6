#pragma once

#include "pcnsm/config.hpp"
#include "pcnsm/learner.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

namespace pcnsm {

struct StepRow {
  StepRecord record;
  std::size_t trial = 1;
};

/// One row per trial. `steps` counts the observations sensed during the
/// trial, including the one that reached the goal.
struct TrialRow {
  std::size_t trial = 1;
  std::size_t steps = 0;
  bool reached = false;
  double cum_reward = 0.0;
  double mean_reward = 0.0;
};

struct RunMetrics {
  std::size_t action_count = 0;
  std::vector<StepRow> steps;
  std::vector<TrialRow> trials;
};

struct RunResult {
  RunMetrics metrics;
  History history;
};

/// Called after every agent step with the agent, the environment and the
/// percept that step consumed.
using StepObserver =
    std::function<void(const Agent &, const Environment &, const Percept &)>;

/// Runs the agent-environment loop in memory. `initial_history`, when given,
/// seeds the agent's memory (the eval path).
RunResult execute(const RunConfig &config, Environment &env,
                  std::optional<History> initial_history = std::nullopt,
                  const StepObserver &observer = {});

/// Writes steps.csv and trials.csv into `dir`, creating it if needed. Checks
/// every trial mean against its step rows first.
void emit_metrics(const RunMetrics &metrics, const std::filesystem::path &dir);

/// execute + emit_metrics + history.txt in config.output_dir.
RunResult run(const RunConfig &config,
              std::optional<History> initial_history = std::nullopt);

} // namespace pcnsm
