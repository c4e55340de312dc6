#pragma once

#include "pcnsm/core.hpp"
#include "pcnsm/learner.hpp"
#include "pcnsm/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pcnsm::testing {

/// Replays pre-recorded draws and fails loudly when the code under test asks
/// for something the script did not anticipate.
class ScriptedRandom final : public RandomSource {
public:
  struct IntDraw {
    std::size_t lo, hi, value;
  };

  void push_real(double v) { reals_.push_back(v); }
  void push_int(std::size_t lo, std::size_t hi, std::size_t value) {
    ints_.push_back({lo, hi, value});
  }
  bool exhausted() const { return reals_.empty() && ints_.empty(); }

  double uniform_real() override {
    if (reals_.empty())
      throw std::logic_error("ScriptedRandom: unexpected uniform_real draw");
    const double v = reals_.front();
    reals_.pop_front();
    return v;
  }
  std::size_t uniform_int(std::size_t lo, std::size_t hi) override {
    if (ints_.empty())
      throw std::logic_error("ScriptedRandom: unexpected uniform_int draw");
    const IntDraw d = ints_.front();
    ints_.pop_front();
    if (d.lo != lo || d.hi != hi)
      throw std::logic_error("ScriptedRandom: uniform_int range [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "] but script expected [" +
                             std::to_string(d.lo) + ", " + std::to_string(d.hi) + "]");
    return d.value;
  }
  double normal(double mean, double) override { return mean; }

private:
  std::deque<double> reals_;
  std::deque<IntDraw> ints_;
};

/// Random history with continuous observations in [-bound, bound].
inline History random_history(std::mt19937_64 &gen, Eigen::Index dim, std::size_t length,
                              std::size_t action_count, double bound = 1.0) {
  std::uniform_real_distribution<double> u(-bound, bound);
  std::uniform_int_distribution<std::size_t> act(0, action_count - 1);
  History h(dim);
  for (std::size_t t = 0; t < length; ++t) {
    Observation o(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      o[i] = u(gen);
    std::optional<ActionId> a;
    if (t > 0)
      a = ActionId{act(gen)};
    h.append({a, o, u(gen)}, u(gen));
  }
  return h;
}

/// Random history over a small discrete alphabet, so exact repeats are common.
inline History random_discrete_history(std::mt19937_64 &gen, std::size_t length,
                                       std::size_t action_count, int symbols,
                                       int reward_levels = 2) {
  std::uniform_int_distribution<int> sym(0, symbols - 1);
  std::uniform_int_distribution<int> rew(0, reward_levels - 1);
  std::uniform_int_distribution<std::size_t> act(0, action_count - 1);
  History h(1);
  for (std::size_t t = 0; t < length; ++t) {
    Observation o(1);
    o[0] = sym(gen);
    std::optional<ActionId> a;
    if (t > 0)
      a = ActionId{act(gen)};
    h.append({a, o, static_cast<double>(rew(gen))}, 0.0);
  }
  return h;
}

// ---- Oracles. Written from the formulas, sharing no code with the library.

/// Match length by literal recursion: n(t, t') = 0 if either index is 0 or the
/// triples differ, else 1 + n(t-1, t'-1).
inline std::size_t oracle_match_length(const History &h, std::size_t t, std::size_t tp) {
  if (t == 0 || tp == 0)
    return 0;
  const bool same = h.action(t) == h.action(tp) && h.reward(t) == h.reward(tp) &&
                    h.observation(t) == h.observation(tp);
  return same ? 1 + oracle_match_length(h, t - 1, tp - 1) : 0;
}

/// Discounted distance summed term by term with std::pow weights, optionally capped.
inline double oracle_discounted(const History &a, std::size_t t, const History &b,
                                std::size_t tp, double lambda,
                                std::size_t cap = std::numeric_limits<std::size_t>::max()) {
  const std::size_t terms = std::min({t, tp, cap});
  double sum = 0.0;
  for (std::size_t tau = 0; tau < terms; ++tau) {
    double sq = 0.0;
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
      const double d = a.observation(t - tau)[i] - b.observation(tp - tau)[i];
      sq += d * d;
    }
    sum += std::pow(lambda, static_cast<double>(tau)) * std::sqrt(sq);
  }
  return sum;
}

/// Brute-force neighborhood: score every candidate h_t (t < anchor) whose
/// taken action is `a` by match length, sort by (longest match, most recent),
/// keep k. Returns member times in rank order.
inline std::vector<std::size_t> oracle_nsm_neighborhood(const History &h, std::size_t anchor,
                                                        std::size_t a, std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> scored; // (match, t)
  for (std::size_t t = 1; t < anchor; ++t) {
    const auto taken = h.action(t + 1);
    if (taken && taken->index == a)
      scored.emplace_back(oracle_match_length(h, t, anchor), t);
  }
  std::sort(scored.begin(), scored.end(), [](const auto &x, const auto &y) {
    if (x.first != y.first)
      return x.first > y.first;
    return x.second > y.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i)
    out.push_back(scored[i].second);
  return out;
}

/// Scalar fixed-point iteration q <- R + gamma * q from q0, n times.
inline double oracle_fixed_point(double reward, double gamma, double q0, std::size_t n) {
  double q = q0;
  for (std::size_t i = 0; i < n; ++i)
    q = reward + gamma * q;
  return q;
}

} // namespace pcnsm::testing
