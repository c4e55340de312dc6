#pragma once

#include "pcnsm/core.hpp"
#include "pcnsm/random.hpp"

#include <cstddef>

namespace pcnsm {

/// Fixed shape of an environment's interface.
struct EnvDescriptor {
  std::size_t action_count = 0;
  Eigen::Index obs_dim = 0;
  double obs_scale_bound = 1.0;
};

/// What the agent receives after sensing.
struct Percept {
  Observation observation;
  double reward = 0.0;
  bool goal_reached = false;
};

/// Episodic environment driven by the harness. A trial ends when a percept
/// reports goal_reached or the trial runs out of actions; the harness then
/// calls new_trial before executing the next action.
class Environment {
public:
  virtual ~Environment() = default;

  virtual EnvDescriptor descriptor() const = 0;

  /// Places everything for a fresh run and senses the initial state.
  virtual Percept reset(RandomSource &placement) = 0;

  virtual Percept step(ActionId action, RandomSource &noise) = 0;

  /// Arena: relocates the target. Maze: returns the agent to the start cell.
  virtual void new_trial(RandomSource &placement) = 0;

  /// Actions after which an unfinished trial is abandoned.
  virtual std::size_t trial_timeout() const = 0;
};

} // namespace pcnsm
