#include "pcnsm/learner.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>
#include <string>

namespace pcnsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_action(ActionId a, std::size_t action_count) {
  if (a.index >= action_count)
    throw std::invalid_argument("learner: action index " + std::to_string(a.index) +
                                " outside action set of size " +
                                std::to_string(action_count));
}

// Keeps the k smallest distances. Candidates arrive newest first, so an equal
// distance never displaces an incumbent.
void offer(Neighborhood &nbhd, std::size_t k, TimeIndex t, double d) {
  auto &dist = nbhd.member_distances;
  if (dist.size() == k && !(d < dist.back()))
    return;
  const auto pos = std::upper_bound(dist.begin(), dist.end(), d) - dist.begin();
  dist.insert(dist.begin() + pos, d);
  nbhd.member_times.insert(nbhd.member_times.begin() + pos, t);
  if (dist.size() > k) {
    dist.pop_back();
    nbhd.member_times.pop_back();
  }
}

} // namespace

std::optional<ActionId> action_taken_from(const History &history, TimeIndex t) {
  if (t >= history.size())
    return std::nullopt;
  return history.action(t + 1);
}

std::vector<Neighborhood> build_neighborhoods(const History &history,
                                              TimeIndex anchor,
                                              const MetricSpec &metric,
                                              std::size_t k,
                                              std::size_t action_count,
                                              std::size_t memory_size) {
  if (k == 0)
    throw std::invalid_argument("build_neighborhoods: k must be positive");
  if (anchor < 1 || anchor > history.size())
    throw std::out_of_range("build_neighborhoods: anchor outside history");

  std::vector<Neighborhood> nbhds(action_count);
  for (std::size_t a = 0; a < action_count; ++a) {
    nbhds[a].action = ActionId{a};
    nbhds[a].member_times.reserve(k + 1);
    nbhds[a].member_distances.reserve(k + 1);
  }

  TimeIndex newest = anchor - 1;
  if (memory_size != 0)
    newest = std::min<TimeIndex>(newest, memory_size - 1);
  for (TimeIndex t = newest; t >= 1; --t) {
    const auto taken = history.action(t + 1);
    if (!taken)
      continue;
    check_action(*taken, action_count);
    auto &nbhd = nbhds[taken->index];
    const double cutoff =
        nbhd.member_distances.size() == k ? nbhd.member_distances.back() : kInf;
    const double d = history_distance(history, t, anchor, metric, cutoff);
    if (d < kInf)
      offer(nbhd, k, t, d);
  }
  return nbhds;
}

double q_estimate(const Neighborhood &nbhd, const History &history) {
  if (nbhd.empty())
    return 0.0;
  double sum = 0.0;
  for (const TimeIndex t : nbhd.member_times)
    sum += history.q(t);
  return sum / static_cast<double>(nbhd.member_times.size());
}

ActionValues action_values(const std::vector<Neighborhood> &nbhds,
                           const History &history) {
  ActionValues values;
  values.q.reserve(nbhds.size());
  values.mean_distance.reserve(nbhds.size());
  for (const auto &nbhd : nbhds) {
    values.q.push_back(q_estimate(nbhd, history));
    if (nbhd.empty()) {
      values.mean_distance.push_back(kInf);
    } else {
      double sum = 0.0;
      for (const double d : nbhd.member_distances)
        sum += d;
      values.mean_distance.push_back(sum /
                                     static_cast<double>(nbhd.member_distances.size()));
    }
  }
  return values;
}

ActionId greedy_action(const ActionValues &values) {
  if (values.q.empty())
    throw std::invalid_argument("greedy_action: empty action set");
  const auto best = std::max_element(values.q.begin(), values.q.end());
  return ActionId{static_cast<std::size_t>(best - values.q.begin())};
}

ActionId exploration_action(const ActionValues &values) {
  if (values.mean_distance.empty())
    throw std::invalid_argument("exploration_action: empty action set");
  const auto &d = values.mean_distance;
  const auto best = std::max_element(d.begin(), d.end());
  return ActionId{static_cast<std::size_t>(best - d.begin())};
}

ActionChoice select_action(const ActionValues &values, double epsilon,
                           RandomSource &rng) {
  if (rng.uniform_real() < epsilon)
    return {exploration_action(values), true};
  return {greedy_action(values), false};
}

void exogenous_update(History &history, const Neighborhood &greedy_nbhd,
                      double bootstrap, double beta, double gamma) {
  for (const TimeIndex i : greedy_nbhd.member_times) {
    const double target = history.reward(i + 1) + gamma * bootstrap;
    history.set_q(i, (1.0 - beta) * history.q(i) + beta * target);
  }
}

void endogenous_updates(History &history, std::size_t n,
                        const MetricSpec &metric, std::size_t k,
                        std::size_t action_count, double beta, double gamma,
                        RandomSource &rng) {
  const std::size_t T = history.size();
  if (T < 2)
    return;
  for (std::size_t i = 0; i < n; ++i) {
    const TimeIndex t = rng.uniform_int(1, T - 1);
    const auto next =
        action_values(build_neighborhoods(history, t + 1, metric, k, action_count),
                      history);
    const double target = history.reward(t + 1) + gamma * max_q(next);
    history.set_q(t, (1.0 - beta) * history.q(t) + beta * target);
  }
}

double init_new_q(const ActionValues &values) {
  return values.q[greedy_action(values).index];
}

double max_q(const ActionValues &values) {
  if (values.q.empty())
    return 0.0;
  return *std::max_element(values.q.begin(), values.q.end());
}

StepRecord agent_step(History &history, const AgentConfig &config,
                      const MetricSpec &metric, std::size_t action_count,
                      std::optional<ActionId> previous_action,
                      const Observation &observation, double reward,
                      RandomSource &rng, const StepOptions &options) {
  if (previous_action)
    check_action(*previous_action, action_count);
  if (options.forced_action)
    check_action(*options.forced_action, action_count);

  history.append({previous_action, observation, reward}, 0.0);
  const TimeIndex T = history.size();

  const auto nbhds = build_neighborhoods(history, T, metric, config.k, action_count,
                                         options.learning ? 0 : options.memory_size);
  const auto values = action_values(nbhds, history);
  const ActionId greedy = greedy_action(values);

  ActionChoice choice = select_action(values, config.epsilon, rng);
  if (options.forced_action)
    choice = {*options.forced_action, false};

  if (options.learning) {
    if (config.exogenous_updates)
      exogenous_update(history, nbhds[greedy.index], max_q(values), config.beta,
                       config.gamma);
    endogenous_updates(history, config.endo_updates_per_step, metric, config.k,
                       action_count, config.beta, config.gamma, rng);
  }
  history.set_q(T, init_new_q(values));

  StepRecord record;
  record.t = T;
  record.chosen_action = choice.action;
  record.was_exploratory = choice.was_exploratory;
  record.reward = reward;
  record.q_of_chosen = values.q[choice.action.index];
  record.per_action_q = values.q;
  assert(record.per_action_q.size() == action_count);
  assert(history.qvalues().size() == history.size());
  return record;
}

Agent::Agent(AgentConfig config, MetricSpec metric, std::size_t action_count,
             Eigen::Index obs_dim)
    : Agent(config, metric, action_count, History(obs_dim)) {}

Agent::Agent(AgentConfig config, MetricSpec metric, std::size_t action_count,
             History history)
    : config_(config), metric_(metric), action_count_(action_count),
      history_(std::move(history)), rng_(derive_seed(config.seed, 0)) {
  config_.validate();
  metric_.validate(config_.truncation_tol);
  if (action_count_ == 0)
    throw std::invalid_argument("agent: action set is empty");
  for (TimeIndex t = history_.size(); t >= 1; --t) {
    if (const auto a = history_.action(t)) {
      check_action(*a, action_count_);
      previous_action_ = a;
      break;
    }
  }
}

void Agent::freeze() {
  if (frozen_size_ == 0)
    frozen_size_ = std::max<std::size_t>(history_.size(), 1);
}

StepRecord Agent::step(const Observation &observation, double reward,
                       const StepOptions &options) {
  StepOptions effective = options;
  if (frozen()) {
    effective.learning = false;
    effective.memory_size = frozen_size_;
  }
  StepRecord record = agent_step(history_, config_, metric_, action_count_,
                                 previous_action_, observation, reward, rng_, effective);
  previous_action_ = record.chosen_action;
  return record;
}

} // namespace pcnsm
