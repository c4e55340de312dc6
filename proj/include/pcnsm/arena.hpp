#pragma once

#include "pcnsm/envsim.hpp"

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

namespace pcnsm {

/// Axis-aligned rectangle in arena coordinates (meters).
struct Rect {
  Eigen::Vector2d lo;
  Eigen::Vector2d hi;

  bool contains(const Eigen::Vector2d &p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
  /// Euclidean distance from p to the rectangle; 0 inside.
  double distance_to(const Eigen::Vector2d &p) const;
};

struct Pose {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double heading = 0.0; // radians, counter-clockwise from +x
};

/// Static arena geometry plus sensor and actuation parameters.
struct ArenaScenario {
  double width = 3.0;
  double depth = 4.0;
  double robot_radius = 0.14;
  std::vector<Rect> obstacles;
  std::optional<Pose> robot_start;
  std::optional<Eigen::Vector2d> target_start;

  double actuation_noise = 0.02; // sigma as a fraction of the commanded magnitude
  double sonar_noise = 0.02;     // additive sigma on normalized readings
  double sonar_range = 3.0;
  double fov = std::numbers::pi / 3.0;
  double vision_range = 5.0;
  double reach_threshold = 0.25;
  double target_margin = 0.4; // extra clearance of sampled targets from walls and obstacles
  double c_max = 500.0;
  double kappa = 100.0; // c_p = kappa / d^2
  std::size_t trial_timeout = 1000;

  /// Throws std::invalid_argument on inconsistent geometry or parameters.
  void validate() const;

  /// key = value text; `obstacle = x0 y0 x1 y1` may repeat. Angles in degrees.
  static ArenaScenario parse(std::string_view text);
  static ArenaScenario load(const std::filesystem::path &path);
};

/// The standard open 3 x 4 m arena, walls only.
ArenaScenario default_arena_scenario();

struct ArenaState {
  Pose robot;
  Eigen::Vector2d target = Eigen::Vector2d::Zero();
};

/// Observation components, in vector order.
struct ArenaObservation {
  double x = 0.0; // horizontal target position in view, [-1, 1]
  double y = 0.0; // target distance mapped to [-1, 1], near is -1
  double p = 0.0; // target visible, 0 or 1
  double f = 1.0; // forward sonar, [0, 1]
  double b = 1.0; // backward sonar, [0, 1]

  Observation vector() const;
  static ArenaObservation from_vector(const Observation &o);
};

struct ArenaAction {
  enum class Kind { turn, translate };
  Kind kind;
  double amount; // radians (left positive) or meters (forward positive)
  std::string_view name;
};

inline constexpr std::size_t kArenaActionCount = 8;

const std::array<ArenaAction, kArenaActionCount> &arena_actions();

/// Applies one action: turns add to the heading, translations move along it
/// and stop at first contact with a wall or obstacle.
ArenaState arena_step(const ArenaScenario &scenario, const ArenaState &state,
                      ActionId action, RandomSource &rng);

struct Sensing {
  ArenaObservation obs;
  double c_p = 0.0; // simulated target pixel count
};

ArenaState arena_step_noiseless(const ArenaScenario &scenario,
                                const ArenaState &state, ActionId action);

Sensing arena_sense(const ArenaScenario &scenario, const ArenaState &state,
                    RandomSource &rng);
Sensing arena_sense_noiseless(const ArenaScenario &scenario,
                              const ArenaState &state);

/// Shaped reward: obstacle penalty plus target bonus when visible.
double arena_reward(const ArenaObservation &obs, double c_p);

bool arena_trial_done(const ArenaScenario &scenario, const ArenaState &state);

/// Robot center inside the inset walls and clear of every obstacle, within
/// `tol` meters.
bool arena_physically_sound(const ArenaScenario &scenario, const ArenaState &state,
                            double tol = 1e-9);

/// Range checks on an observation, including p = 0 => x = y = 0.
bool arena_observation_valid(const ArenaObservation &obs);

/// Collision-free uniform robot pose.
Pose sample_robot_pose(const ArenaScenario &scenario, RandomSource &rng);
/// Uniform target reachable by the robot and farther than the reach
/// threshold from `robot`.
Eigen::Vector2d sample_target(const ArenaScenario &scenario,
                              const Eigen::Vector2d &robot, RandomSource &rng);

class ArenaEnvironment final : public Environment {
public:
  explicit ArenaEnvironment(ArenaScenario scenario);

  EnvDescriptor descriptor() const override;
  Percept reset(RandomSource &placement) override;
  Percept step(ActionId action, RandomSource &noise) override;
  void new_trial(RandomSource &placement) override;
  std::size_t trial_timeout() const override { return scenario_.trial_timeout; }

  const ArenaState &state() const { return state_; }
  const ArenaScenario &scenario() const { return scenario_; }

private:
  Percept sense(RandomSource &noise);

  ArenaScenario scenario_;
  ArenaState state_;
};

/// Largest distance between two arena observation vectors.
double arena_obs_scale_bound();

} // namespace pcnsm
