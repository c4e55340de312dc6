#include "pcnsm/harness.hpp"

#include "pcnsm/history_io.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace pcnsm {

namespace {

enum Stream : std::uint64_t { kPlacementStream = 1, kNoiseStream = 2, kPolicyStream = 3 };

void close_trial(RunMetrics &metrics, std::size_t trial, std::size_t first_row,
                 bool reached) {
  TrialRow row;
  row.trial = trial;
  row.reached = reached;
  for (std::size_t i = first_row; i < metrics.steps.size(); ++i) {
    row.cum_reward += metrics.steps[i].record.reward;
    ++row.steps;
  }
  row.mean_reward = row.steps ? row.cum_reward / static_cast<double>(row.steps) : 0.0;
  metrics.trials.push_back(row);
}

std::ofstream open_for_write(const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  return out;
}

} // namespace

RunResult execute(const RunConfig &config, Environment &env,
                  std::optional<History> initial_history,
                  const StepObserver &observer) {
  config.validate();
  const EnvDescriptor desc = env.descriptor();
  const MetricSpec metric = make_metric(config, desc);

  AgentConfig agent_config = config.agent;
  if (config.eval_mode)
    agent_config.epsilon = 0.0;

  if (initial_history && initial_history->dim() != desc.obs_dim)
    throw std::invalid_argument("history dimension does not match the environment");
  Agent agent = initial_history
                    ? Agent(agent_config, metric, desc.action_count, std::move(*initial_history))
                    : Agent(agent_config, metric, desc.action_count, desc.obs_dim);

  SeededRandom placement(derive_seed(config.agent.seed, kPlacementStream));
  SeededRandom noise(derive_seed(config.agent.seed, kNoiseStream));
  SeededRandom policy(derive_seed(config.agent.seed, kPolicyStream));

  RunMetrics metrics;
  metrics.action_count = desc.action_count;
  std::size_t trial = 1;
  std::size_t trial_start = 0;

  if (config.eval_mode)
    agent.freeze();
  StepOptions options;

  Percept percept = env.reset(placement);
  for (std::size_t n = 0; n < config.max_actions; ++n) {
    if (config.random_policy)
      options.forced_action = ActionId{policy.uniform_int(0, desc.action_count - 1)};
    StepRecord record = agent.step(percept.observation, percept.reward, options);
    metrics.steps.push_back({record, trial});
    if (observer)
      observer(agent, env, percept);

    const bool timed_out = metrics.steps.size() - trial_start >= env.trial_timeout();
    if (percept.goal_reached || timed_out) {
      close_trial(metrics, trial, trial_start, percept.goal_reached);
      if (metrics.trials.size() == config.trials)
        break;
      env.new_trial(placement);
      ++trial;
      trial_start = metrics.steps.size();
    }
    percept = env.step(record.chosen_action, noise);
  }
  if (trial_start < metrics.steps.size() && metrics.trials.size() < config.trials)
    close_trial(metrics, trial, trial_start, false);

  return {std::move(metrics), agent.history()};
}

void emit_metrics(const RunMetrics &metrics, const std::filesystem::path &dir) {
  std::size_t row = 0;
  for (const auto &tr : metrics.trials) {
    double cum = 0.0;
    std::size_t n = 0;
    for (; row < metrics.steps.size() && metrics.steps[row].trial == tr.trial; ++row, ++n)
      cum += metrics.steps[row].record.reward;
    const double mean = n ? cum / static_cast<double>(n) : 0.0;
    if (n != tr.steps || mean != tr.mean_reward)
      throw std::logic_error("metrics: trial " + std::to_string(tr.trial) +
                             " disagrees with its step rows");
  }

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  const auto steps_path = dir / "steps.csv";
  auto steps = open_for_write(steps_path);
  steps << "t,trial,action,exploratory,reward,q_chosen";
  for (std::size_t a = 0; a < metrics.action_count; ++a)
    steps << ",q_" << a;
  steps << '\n';
  for (const auto &[rec, trial] : metrics.steps) {
    steps << rec.t << ',' << trial << ',' << rec.chosen_action.index << ','
          << (rec.was_exploratory ? 1 : 0) << ',' << format_real(rec.reward) << ','
          << format_real(rec.q_of_chosen);
    for (const double q : rec.per_action_q)
      steps << ',' << format_real(q);
    steps << '\n';
  }
  if (!steps.flush())
    throw std::runtime_error("write failed for " + steps_path.string());

  const auto trials_path = dir / "trials.csv";
  auto trials = open_for_write(trials_path);
  trials << "trial,steps,cum_reward,mean_reward,reached\n";
  for (const auto &tr : metrics.trials)
    trials << tr.trial << ',' << tr.steps << ',' << format_real(tr.cum_reward) << ','
           << format_real(tr.mean_reward) << ',' << (tr.reached ? 1 : 0) << '\n';
  if (!trials.flush())
    throw std::runtime_error("write failed for " + trials_path.string());
}

RunResult run(const RunConfig &config, std::optional<History> initial_history) {
  config.validate();
  auto env = make_environment(config);
  RunResult result = execute(config, *env, std::move(initial_history));
  emit_metrics(result.metrics, config.output_dir);
  save_history(result.history, result.metrics.action_count,
               config.output_dir / "history.txt");
  return result;
}

} // namespace pcnsm
