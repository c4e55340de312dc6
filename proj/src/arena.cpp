#include "pcnsm/arena.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pcnsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr int kMaxPlacementAttempts = 100000;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

Eigen::Vector2d heading_vector(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

// Entry parameter of the ray p + s u (s >= 0) into box [lo, hi]; +inf if it
// misses. A ray starting inside returns 0.
double ray_box_entry(const Eigen::Vector2d &p, const Eigen::Vector2d &u,
                     const Eigen::Vector2d &lo, const Eigen::Vector2d &hi) {
  double t0 = 0.0;
  double t1 = kInf;
  for (int i = 0; i < 2; ++i) {
    if (u[i] == 0.0) {
      if (p[i] < lo[i] || p[i] > hi[i])
        return kInf;
      continue;
    }
    double a = (lo[i] - p[i]) / u[i];
    double b = (hi[i] - p[i]) / u[i];
    if (a > b)
      std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    if (t0 > t1)
      return kInf;
  }
  return t0;
}

double ray_circle_entry(const Eigen::Vector2d &p, const Eigen::Vector2d &u,
                        const Eigen::Vector2d &c, double r) {
  const Eigen::Vector2d m = p - c;
  const double bq = m.dot(u);
  const double cq = m.squaredNorm() - r * r;
  if (cq <= 0.0)
    return 0.0;
  if (bq >= 0.0)
    return kInf;
  const double disc = bq * bq - cq;
  if (disc < 0.0)
    return kInf;
  return std::max(0.0, -bq - std::sqrt(disc));
}

// First s >= 0 at which a disc of radius r centered on p + s u touches rect.
double disc_contact(const Eigen::Vector2d &p, const Eigen::Vector2d &u,
                    const Rect &rect, double r) {
  const Eigen::Vector2d closest = p.cwiseMax(rect.lo).cwiseMin(rect.hi);
  const Eigen::Vector2d away = p - closest;
  if (away.norm() <= r)
    return away.dot(u) < 0.0 || away.isZero() ? 0.0 : kInf;

  const Eigen::Vector2d rx(r, 0.0);
  const Eigen::Vector2d ry(0.0, r);
  double s = std::min(ray_box_entry(p, u, rect.lo - rx, rect.hi + rx),
                      ray_box_entry(p, u, rect.lo - ry, rect.hi + ry));
  const Eigen::Vector2d corners[] = {rect.lo, rect.hi, {rect.lo.x(), rect.hi.y()},
                                     {rect.hi.x(), rect.lo.y()}};
  for (const auto &c : corners)
    s = std::min(s, ray_circle_entry(p, u, c, r));
  return s;
}

// Distance along u until the disc center leaves [lo, hi].
double box_exit(const Eigen::Vector2d &p, const Eigen::Vector2d &u,
                const Eigen::Vector2d &lo, const Eigen::Vector2d &hi) {
  double s = kInf;
  for (int i = 0; i < 2; ++i) {
    if (u[i] > 0.0)
      s = std::min(s, std::max(0.0, (hi[i] - p[i]) / u[i]));
    else if (u[i] < 0.0)
      s = std::min(s, std::max(0.0, (lo[i] - p[i]) / u[i]));
  }
  return s;
}

bool segment_hits_box(const Eigen::Vector2d &a, const Eigen::Vector2d &b,
                      const Rect &rect) {
  const Eigen::Vector2d d = b - a;
  const double len = d.norm();
  if (len == 0.0)
    return rect.contains(a);
  return ray_box_entry(a, d / len, rect.lo, rect.hi) <= len;
}

double sonar_distance(const ArenaScenario &sc, const Eigen::Vector2d &p,
                      const Eigen::Vector2d &u) {
  double s = box_exit(p, u, Eigen::Vector2d::Zero(), Eigen::Vector2d(sc.width, sc.depth));
  for (const auto &rect : sc.obstacles)
    s = std::min(s, ray_box_entry(p, u, rect.lo, rect.hi));
  return s;
}

double normalized_sonar(const ArenaScenario &sc, double ray_distance,
                        RandomSource *rng) {
  const double gap = std::max(0.0, ray_distance - sc.robot_radius);
  double v = std::min(gap, sc.sonar_range) / sc.sonar_range;
  if (rng && sc.sonar_noise > 0.0)
    v += rng->normal(0.0, sc.sonar_noise);
  return std::clamp(v, 0.0, 1.0);
}

ArenaState step_impl(const ArenaScenario &sc, const ArenaState &state,
                     ActionId action, RandomSource *rng) {
  if (action.index >= kArenaActionCount)
    throw std::invalid_argument("arena: action index out of range");
  const ArenaAction &act = arena_actions()[action.index];
  double amount = act.amount;
  if (rng && sc.actuation_noise > 0.0)
    amount += rng->normal(0.0, sc.actuation_noise * std::abs(act.amount));

  ArenaState next = state;
  if (act.kind == ArenaAction::Kind::turn) {
    next.robot.heading = wrap_angle(state.robot.heading + amount);
    return next;
  }

  const Eigen::Vector2d &p = state.robot.position;
  const Eigen::Vector2d u = heading_vector(state.robot.heading) * (amount < 0.0 ? -1.0 : 1.0);
  const double r = sc.robot_radius;
  double travel = std::abs(amount);
  travel = std::min(travel, box_exit(p, u, Eigen::Vector2d(r, r),
                                     Eigen::Vector2d(sc.width - r, sc.depth - r)));
  for (const auto &rect : sc.obstacles)
    travel = std::min(travel, disc_contact(p, u, rect, r));
  next.robot.position = p + travel * u;
  assert(arena_physically_sound(sc, next, 1e-9));
  return next;
}

Sensing sense_impl(const ArenaScenario &sc, const ArenaState &state,
                   RandomSource *rng) {
  Sensing out;
  const Eigen::Vector2d &pos = state.robot.position;
  const Eigen::Vector2d to_target = state.target - pos;
  const double d = to_target.norm();
  const double bearing =
      d > 0.0 ? wrap_angle(std::atan2(to_target.y(), to_target.x()) - state.robot.heading)
              : 0.0;
  bool visible = std::abs(bearing) <= sc.fov / 2.0 && d <= sc.vision_range;
  for (const auto &rect : sc.obstacles)
    visible = visible && !segment_hits_box(pos, state.target, rect);

  if (visible) {
    out.obs.p = 1.0;
    out.obs.x = std::clamp(bearing / (sc.fov / 2.0), -1.0, 1.0);
    out.obs.y = std::clamp(-1.0 + 2.0 * d / sc.vision_range, -1.0, 1.0);
    out.c_p = d > 0.0 ? std::min(sc.c_max, sc.kappa / (d * d)) : sc.c_max;
  }

  const Eigen::Vector2d u = heading_vector(state.robot.heading);
  out.obs.f = normalized_sonar(sc, sonar_distance(sc, pos, u), rng);
  out.obs.b = normalized_sonar(sc, sonar_distance(sc, pos, -u), rng);
  assert(arena_observation_valid(out.obs));
  return out;
}

bool pose_clear(const ArenaScenario &sc, const Eigen::Vector2d &p) {
  return std::all_of(sc.obstacles.begin(), sc.obstacles.end(),
                     [&](const Rect &r) { return r.distance_to(p) > sc.robot_radius; });
}

Eigen::Vector2d uniform_inset_point(const ArenaScenario &sc, RandomSource &rng) {
  const double r = sc.robot_radius;
  return {r + (sc.width - 2.0 * r) * rng.uniform_real(),
          r + (sc.depth - 2.0 * r) * rng.uniform_real()};
}

// key = value parsing helpers.
std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<double> parse_numbers(const std::string &value, std::size_t expected,
                                  std::size_t line, const std::string &key) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
      throw std::invalid_argument("scenario: line " + std::to_string(line) +
                                  ": bad number '" + tok + "' for " + key);
    out.push_back(v);
  }
  if (out.size() != expected)
    throw std::invalid_argument("scenario: line " + std::to_string(line) + ": " + key +
                                " expects " + std::to_string(expected) + " values");
  return out;
}

} // namespace

double Rect::distance_to(const Eigen::Vector2d &p) const {
  return (p - p.cwiseMax(lo).cwiseMin(hi)).norm();
}

Observation ArenaObservation::vector() const {
  Observation o(5);
  o << x, y, p, f, b;
  return o;
}

ArenaObservation ArenaObservation::from_vector(const Observation &o) {
  if (o.size() != 5)
    throw std::invalid_argument("arena: observation must have 5 components");
  return {o[0], o[1], o[2], o[3], o[4]};
}

const std::array<ArenaAction, kArenaActionCount> &arena_actions() {
  static const std::array<ArenaAction, kArenaActionCount> actions{{
      {ArenaAction::Kind::turn, kPi / 8.0, "turn left 22.5"},
      {ArenaAction::Kind::turn, kPi / 4.0, "turn left 45"},
      {ArenaAction::Kind::turn, -kPi / 8.0, "turn right 22.5"},
      {ArenaAction::Kind::turn, -kPi / 4.0, "turn right 45"},
      {ArenaAction::Kind::translate, 0.05, "forward 5cm"},
      {ArenaAction::Kind::translate, 0.15, "forward 15cm"},
      {ArenaAction::Kind::translate, -0.05, "backward 5cm"},
      {ArenaAction::Kind::translate, -0.15, "backward 15cm"},
  }};
  return actions;
}

ArenaState arena_step(const ArenaScenario &scenario, const ArenaState &state,
                      ActionId action, RandomSource &rng) {
  return step_impl(scenario, state, action, &rng);
}

ArenaState arena_step_noiseless(const ArenaScenario &scenario,
                                const ArenaState &state, ActionId action) {
  return step_impl(scenario, state, action, nullptr);
}

Sensing arena_sense(const ArenaScenario &scenario, const ArenaState &state,
                    RandomSource &rng) {
  return sense_impl(scenario, state, &rng);
}

Sensing arena_sense_noiseless(const ArenaScenario &scenario,
                              const ArenaState &state) {
  return sense_impl(scenario, state, nullptr);
}

double arena_reward(const ArenaObservation &obs, double c_p) {
  const double obstacle = -20.0 / std::max(0.01, std::min(obs.f, obs.b));
  const double target = obs.p * (500.0 - 50.0 * std::abs(obs.x) - 250.0 * obs.y + c_p);
  return obstacle + target;
}

bool arena_trial_done(const ArenaScenario &scenario, const ArenaState &state) {
  return (state.robot.position - state.target).norm() <= scenario.reach_threshold;
}

bool arena_physically_sound(const ArenaScenario &sc, const ArenaState &state,
                            double tol) {
  const Eigen::Vector2d &p = state.robot.position;
  const double r = sc.robot_radius;
  if (!p.allFinite() || !std::isfinite(state.robot.heading))
    return false;
  if (p.x() < r - tol || p.x() > sc.width - r + tol || p.y() < r - tol ||
      p.y() > sc.depth - r + tol)
    return false;
  return std::all_of(sc.obstacles.begin(), sc.obstacles.end(),
                     [&](const Rect &rect) { return rect.distance_to(p) >= r - tol; });
}

bool arena_observation_valid(const ArenaObservation &o) {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(o.x, -1.0, 1.0) || !in(o.y, -1.0, 1.0) || !in(o.f, 0.0, 1.0) ||
      !in(o.b, 0.0, 1.0))
    return false;
  if (o.p != 0.0 && o.p != 1.0)
    return false;
  return o.p == 1.0 || (o.x == 0.0 && o.y == 0.0);
}

Pose sample_robot_pose(const ArenaScenario &sc, RandomSource &rng) {
  for (int i = 0; i < kMaxPlacementAttempts; ++i) {
    const Eigen::Vector2d p = uniform_inset_point(sc, rng);
    const double heading = wrap_angle(2.0 * kPi * rng.uniform_real());
    if (pose_clear(sc, p))
      return {p, heading};
  }
  throw std::runtime_error("arena: no collision-free robot pose found");
}

Eigen::Vector2d sample_target(const ArenaScenario &sc, const Eigen::Vector2d &robot,
                              RandomSource &rng) {
  const double m = sc.target_margin;
  for (int i = 0; i < kMaxPlacementAttempts; ++i) {
    const Eigen::Vector2d p = uniform_inset_point(sc, rng);
    const bool inside = p.x() >= sc.robot_radius + m && p.x() <= sc.width - sc.robot_radius - m &&
                        p.y() >= sc.robot_radius + m && p.y() <= sc.depth - sc.robot_radius - m;
    const bool clear = std::all_of(sc.obstacles.begin(), sc.obstacles.end(), [&](const Rect &r) {
      return r.distance_to(p) > sc.robot_radius + m;
    });
    if (inside && clear && (p - robot).norm() > sc.reach_threshold)
      return p;
  }
  throw std::runtime_error("arena: no reachable target location found");
}

// Open arena: an obstacle in the middle occludes the target for long
// stretches and 3000 actions are then not enough to learn around it.
ArenaScenario default_arena_scenario() { return ArenaScenario{}; }

void ArenaScenario::validate() const {
  auto fail = [](const std::string &what) {
    throw std::invalid_argument("scenario: " + what);
  };
  if (!(width > 0.0) || !(depth > 0.0))
    fail("arena size must be positive");
  if (!(robot_radius > 0.0) || 2.0 * robot_radius >= std::min(width, depth))
    fail("robot radius does not fit the arena");
  for (const auto &r : obstacles)
    if (!(r.lo.array() < r.hi.array()).all())
      fail("obstacle rectangle must have lo < hi");
  if (!(actuation_noise >= 0.0) || !(sonar_noise >= 0.0))
    fail("noise sigmas must be nonnegative");
  if (!(sonar_range > 0.0) || !(vision_range > 0.0))
    fail("sensor ranges must be positive");
  if (!(fov > 0.0) || fov > 2.0 * kPi)
    fail("field of view must lie in (0, 360] degrees");
  if (!(reach_threshold > 0.0))
    fail("reach threshold must be positive");
  if (!(target_margin >= 0.0) || 2.0 * (robot_radius + target_margin) >= std::min(width, depth))
    fail("target margin leaves no room for the target");
  if (!(c_max >= 0.0) || !(kappa >= 0.0))
    fail("pixel model constants must be nonnegative");
  if (trial_timeout == 0)
    fail("trial timeout must be positive");
  if (robot_start && !arena_physically_sound(*this, {*robot_start, Eigen::Vector2d::Zero()}, 0.0))
    fail("robot start pose collides with the arena");
}

ArenaScenario ArenaScenario::parse(std::string_view text) {
  ArenaScenario sc;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string l = trim(raw);
    if (l.empty())
      continue;
    const auto eq = l.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("scenario: line " + std::to_string(line) +
                                  ": expected key = value");
    const std::string key = trim(std::string_view(l).substr(0, eq));
    const std::string value = trim(std::string_view(l).substr(eq + 1));
    auto one = [&] { return parse_numbers(value, 1, line, key)[0]; };

    if (key == "arena_width")
      sc.width = one();
    else if (key == "arena_depth")
      sc.depth = one();
    else if (key == "robot_radius")
      sc.robot_radius = one();
    else if (key == "obstacle") {
      const auto v = parse_numbers(value, 4, line, key);
      sc.obstacles.push_back({{v[0], v[1]}, {v[2], v[3]}});
    } else if (key == "robot_start") {
      const auto v = parse_numbers(value, 3, line, key);
      sc.robot_start = Pose{{v[0], v[1]}, wrap_angle(v[2] * kPi / 180.0)};
    } else if (key == "target_start") {
      const auto v = parse_numbers(value, 2, line, key);
      sc.target_start = Eigen::Vector2d(v[0], v[1]);
    } else if (key == "actuation_noise")
      sc.actuation_noise = one();
    else if (key == "sonar_noise")
      sc.sonar_noise = one();
    else if (key == "sonar_range")
      sc.sonar_range = one();
    else if (key == "fov_deg")
      sc.fov = one() * kPi / 180.0;
    else if (key == "vision_range")
      sc.vision_range = one();
    else if (key == "reach_threshold")
      sc.reach_threshold = one();
    else if (key == "target_margin")
      sc.target_margin = one();
    else if (key == "c_max")
      sc.c_max = one();
    else if (key == "kappa")
      sc.kappa = one();
    else if (key == "trial_timeout") {
      const double v = one();
      if (v < 1.0 || v != std::floor(v))
        throw std::invalid_argument("scenario: line " + std::to_string(line) +
                                    ": trial_timeout must be a positive integer");
      sc.trial_timeout = static_cast<std::size_t>(v);
    } else
      throw std::invalid_argument("scenario: line " + std::to_string(line) +
                                  ": unknown key '" + key + "'");
  }
  sc.validate();
  return sc;
}

ArenaScenario ArenaScenario::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("scenario: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

ArenaEnvironment::ArenaEnvironment(ArenaScenario scenario)
    : scenario_(std::move(scenario)) {
  scenario_.validate();
}

EnvDescriptor ArenaEnvironment::descriptor() const {
  return {kArenaActionCount, 5, arena_obs_scale_bound()};
}

Percept ArenaEnvironment::reset(RandomSource &placement) {
  state_.robot = scenario_.robot_start ? *scenario_.robot_start
                                       : sample_robot_pose(scenario_, placement);
  state_.target = scenario_.target_start
                      ? *scenario_.target_start
                      : sample_target(scenario_, state_.robot.position, placement);
  // Sensing here is noise-free so the first percept depends on placement only.
  const Sensing s = arena_sense_noiseless(scenario_, state_);
  return {s.obs.vector(), arena_reward(s.obs, s.c_p), arena_trial_done(scenario_, state_)};
}

Percept ArenaEnvironment::step(ActionId action, RandomSource &noise) {
  state_ = arena_step(scenario_, state_, action, noise);
  return sense(noise);
}

Percept ArenaEnvironment::sense(RandomSource &noise) {
  const Sensing s = arena_sense(scenario_, state_, noise);
  return {s.obs.vector(), arena_reward(s.obs, s.c_p), arena_trial_done(scenario_, state_)};
}

void ArenaEnvironment::new_trial(RandomSource &placement) {
  state_.target = sample_target(scenario_, state_.robot.position, placement);
}

double arena_obs_scale_bound() {
  // x and y span 2, p, f and b span 1.
  return std::sqrt(2.0 * 2.0 + 2.0 * 2.0 + 1.0 + 1.0 + 1.0);
}

} // namespace pcnsm
