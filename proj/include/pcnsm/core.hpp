#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pcnsm {

/// Environment-defined observation vector.
using Observation = Eigen::VectorXd;

/// 1-based position in a history (t = 1..T).
using TimeIndex = std::size_t;

/// Discrete action identifier. Validity against an action set is checked by
/// whoever owns the set (environment or agent).
struct ActionId {
  std::size_t index = 0;

  friend constexpr auto operator<=>(ActionId, ActionId) = default;
};

/// One history entry. `action` is the action that led into `observation`;
/// it is empty only for the first entry of a history.
struct Experience {
  std::optional<ActionId> action;
  Observation observation;
  double reward = 0.0;
};

/// Chronological experience list with one q-value per entry.
///
/// Storage is append-only. Observations live in one contiguous buffer and are
/// handed out as `Eigen::Map` views so metric kernels run without copies.
class History {
public:
  using ObservationView = Eigen::Map<const Eigen::VectorXd>;

  explicit History(Eigen::Index obs_dim);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return rewards_.size(); }
  bool empty() const { return rewards_.empty(); }

  /// Appends `exp` with q-value `initial_q`. Throws std::invalid_argument on a
  /// wrong observation length, a non-finite component, or a null action past
  /// the first entry.
  void append(const Experience &exp, double initial_q);

  std::optional<ActionId> action(TimeIndex t) const;
  ObservationView observation(TimeIndex t) const;
  double reward(TimeIndex t) const;
  double q(TimeIndex t) const;
  Experience entry(TimeIndex t) const;

  /// Throws std::invalid_argument if `value` is not finite.
  void set_q(TimeIndex t, double value);

  std::span<const double> qvalues() const { return q_; }

  friend bool operator==(const History &, const History &) = default;

private:
  void check_index(TimeIndex t) const;

  Eigen::Index dim_;
  std::vector<std::optional<ActionId>> actions_;
  std::vector<double> observations_;
  std::vector<double> rewards_;
  std::vector<double> q_;
};

/// Free-function form of History::append.
History append(History history, const Experience &exp, double initial_q);

/// Observations at t, t-1, ... back to max(1, t-window+1) as the columns of a
/// dim x min(t, window) matrix, newest first. Throws std::out_of_range if t is
/// not in [1, |history|] and std::invalid_argument if window is 0.
Eigen::MatrixXd suffix_observations(const History &history, TimeIndex t,
                                    std::size_t window);

/// Learner hyperparameters. Immutable for the duration of a run.
struct AgentConfig {
  std::size_t k = 3;
  double epsilon = 0.3;
  double gamma = 0.9;
  double beta = 0.2;
  double lambda = 0.8;
  std::size_t endo_updates_per_step = 32;
  double truncation_tol = 1e-6;
  std::uint64_t seed = 1;
  // Neighborhood update on real experience; off reproduces the
  // pure replay loop.
  bool exogenous_updates = false;

  /// Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
};

/// Per-step log row emitted by the agent.
struct StepRecord {
  TimeIndex t = 0;
  ActionId chosen_action;
  bool was_exploratory = false;
  double reward = 0.0;
  double q_of_chosen = 0.0;
  std::vector<double> per_action_q;

  friend bool operator==(const StepRecord &, const StepRecord &) = default;
};

} // namespace pcnsm
