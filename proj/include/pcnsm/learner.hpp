#pragma once

#include "pcnsm/core.hpp"
#include "pcnsm/metric.hpp"
#include "pcnsm/random.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace pcnsm {

// Entry t of a History stores the action that led *into* o_t. The action
// taken *from* h_t is therefore the one stored at t + 1, and the reward that
// followed it is reward(t + 1). Every learner rule below is phrased in those
// terms: "h_t where a was taken" means action(t + 1) == a, and the reward
// paired with q(h_t) is reward(t + 1).

/// Action taken from h_t, i.e. the action stored at t + 1; empty for t = T.
std::optional<ActionId> action_taken_from(const History &history, TimeIndex t);

/// k nearest stored observation states at which one action was taken.
struct Neighborhood {
  ActionId action;
  std::vector<TimeIndex> member_times;
  std::vector<double> member_distances; // nondecreasing

  bool empty() const { return member_times.empty(); }
};

/// Per-action value estimates and mean neighbor distances. An empty
/// neighborhood has q = 0 and mean distance +inf.
struct ActionValues {
  std::vector<double> q;
  std::vector<double> mean_distance;
};

/// One neighborhood per action, anchored at h_anchor, drawn from h_t with
/// t < anchor. Ties in distance go to the more recent entry. A nonzero
/// `memory_size` further restricts candidates to h_t whose taken action is
/// stored within the first `memory_size` entries (t < memory_size).
std::vector<Neighborhood> build_neighborhoods(const History &history,
                                              TimeIndex anchor,
                                              const MetricSpec &metric,
                                              std::size_t k,
                                              std::size_t action_count,
                                              std::size_t memory_size = 0);

/// Mean member q-value; 0 for an empty neighborhood.
double q_estimate(const Neighborhood &nbhd, const History &history);

ActionValues action_values(const std::vector<Neighborhood> &nbhds,
                           const History &history);

/// Argmax of q, lowest index on ties.
ActionId greedy_action(const ActionValues &values);

/// Argmax of mean neighbor distance, so untried actions come first; lowest
/// index on ties. Never looks at q.
ActionId exploration_action(const ActionValues &values);

struct ActionChoice {
  ActionId action;
  bool was_exploratory = false;
};

/// Draws one uniform real; explores when it falls below epsilon.
ActionChoice select_action(const ActionValues &values, double epsilon,
                           RandomSource &rng);

/// q(h_i) <- (1 - beta) q(h_i) + beta (r_i + gamma * bootstrap) for every
/// member h_i, where r_i is the reward that followed h_i.
void exogenous_update(History &history, const Neighborhood &greedy_nbhd,
                      double bootstrap, double beta, double gamma);

/// Replays `n` updates on uniformly drawn t in [1, T-1]:
/// q(h_t) <- (1 - beta) q(h_t) + beta (r_t + gamma * max_a Q(h_{t+1}, a)).
/// No-op when the history holds fewer than two entries.
void endogenous_updates(History &history, std::size_t n,
                        const MetricSpec &metric, std::size_t k,
                        std::size_t action_count, double beta, double gamma,
                        RandomSource &rng);

/// Value of the greedy action; 0 when every neighborhood is empty.
double init_new_q(const ActionValues &values);

/// Largest entry of values.q (0 for an empty vector).
double max_q(const ActionValues &values);

struct StepOptions {
  // false: no q-value is rewritten and only the first `memory_size` entries
  // act as neighbors, so the policy stays fixed while h_T keeps growing.
  bool learning = true;
  std::size_t memory_size = 0;
  std::optional<ActionId> forced_action;
};

/// One pass of the agent loop: store (previous_action, observation, reward)
/// as h_T, estimate action values, pick an action, run the update passes,
/// then initialize q(h_T).
StepRecord agent_step(History &history, const AgentConfig &config,
                      const MetricSpec &metric, std::size_t action_count,
                      std::optional<ActionId> previous_action,
                      const Observation &observation, double reward,
                      RandomSource &rng, const StepOptions &options = {});

/// Owns the history, the RNG and the pending action of one learner.
class Agent {
public:
  Agent(AgentConfig config, MetricSpec metric, std::size_t action_count,
        Eigen::Index obs_dim);

  /// Continues from a stored history. The next stored entry is tagged with
  /// the last action found in `history` (none if it is empty).
  Agent(AgentConfig config, MetricSpec metric, std::size_t action_count,
        History history);

  StepRecord step(const Observation &observation, double reward,
                  const StepOptions &options = {});

  /// Stops learning: later steps leave every q-value alone and draw
  /// neighbors only from the history as it stands now.
  void freeze();
  bool frozen() const { return frozen_size_ != 0; }

  const History &history() const { return history_; }
  const AgentConfig &config() const { return config_; }
  const MetricSpec &metric() const { return metric_; }
  std::size_t action_count() const { return action_count_; }

private:
  AgentConfig config_;
  MetricSpec metric_;
  std::size_t action_count_;
  History history_;
  SeededRandom rng_;
  std::optional<ActionId> previous_action_;
  std::size_t frozen_size_ = 0;
};

} // namespace pcnsm
