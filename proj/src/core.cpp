#include "pcnsm/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pcnsm {

History::History(Eigen::Index obs_dim) : dim_(obs_dim) {
  if (obs_dim <= 0)
    throw std::invalid_argument("history: observation dimension must be positive");
}

void History::append(const Experience &exp, double initial_q) {
  if (exp.observation.size() != dim_)
    throw std::invalid_argument("history: observation has dimension " +
                                std::to_string(exp.observation.size()) +
                                ", expected " + std::to_string(dim_));
  if (!exp.observation.allFinite())
    throw std::invalid_argument("history: non-finite observation component");
  if (!std::isfinite(exp.reward))
    throw std::invalid_argument("history: non-finite reward");
  if (!std::isfinite(initial_q))
    throw std::invalid_argument("history: non-finite initial q-value");
  if (!exp.action && !empty())
    throw std::invalid_argument("history: only the first entry may omit its action");

  actions_.push_back(exp.action);
  observations_.insert(observations_.end(), exp.observation.data(),
                       exp.observation.data() + dim_);
  rewards_.push_back(exp.reward);
  q_.push_back(initial_q);
  assert(q_.size() == rewards_.size() && actions_.size() == rewards_.size());
  assert(observations_.size() == rewards_.size() * static_cast<std::size_t>(dim_));
}

void History::check_index(TimeIndex t) const {
  if (t < 1 || t > size())
    throw std::out_of_range("history: time index " + std::to_string(t) +
                            " outside [1, " + std::to_string(size()) + "]");
}

std::optional<ActionId> History::action(TimeIndex t) const {
  check_index(t);
  return actions_[t - 1];
}

History::ObservationView History::observation(TimeIndex t) const {
  check_index(t);
  return ObservationView(observations_.data() + (t - 1) * dim_, dim_);
}

double History::reward(TimeIndex t) const {
  check_index(t);
  return rewards_[t - 1];
}

double History::q(TimeIndex t) const {
  check_index(t);
  return q_[t - 1];
}

Experience History::entry(TimeIndex t) const {
  return {action(t), observation(t), reward(t)};
}

void History::set_q(TimeIndex t, double value) {
  check_index(t);
  if (!std::isfinite(value))
    throw std::invalid_argument("history: non-finite q-value");
  q_[t - 1] = value;
}

History append(History history, const Experience &exp, double initial_q) {
  history.append(exp, initial_q);
  return history;
}

Eigen::MatrixXd suffix_observations(const History &history, TimeIndex t,
                                    std::size_t window) {
  if (window == 0)
    throw std::invalid_argument("suffix_observations: window must be positive");
  if (t < 1 || t > history.size())
    throw std::out_of_range("suffix_observations: time index out of range");
  const auto count = std::min<std::size_t>(t, window);
  Eigen::MatrixXd out(history.dim(), static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i)
    out.col(static_cast<Eigen::Index>(i)) = history.observation(t - i);
  return out;
}

void AgentConfig::validate() const {
  auto fail = [](const char *what) {
    throw std::invalid_argument(std::string("agent config: ") + what);
  };
  if (k == 0)
    fail("k must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    fail("epsilon must lie in [0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0))
    fail("gamma must lie in [0, 1)");
  if (!(beta > 0.0 && beta <= 1.0))
    fail("beta must lie in (0, 1]");
  if (!(lambda >= 0.0 && lambda < 1.0))
    fail("lambda must lie in [0, 1)");
  if (!(truncation_tol > 0.0) || !std::isfinite(truncation_tol))
    fail("truncation_tol must be a positive real");
}

} // namespace pcnsm
