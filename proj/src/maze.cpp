#include "pcnsm/maze.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcnsm {

namespace {

[[noreturn]] void reject(std::size_t line, const std::string &what) {
  throw std::invalid_argument("maze: line " + std::to_string(line) + ": " + what);
}

constexpr int kRowStep[] = {-1, 0, 1, 0};
constexpr int kColStep[] = {0, 1, 0, -1};

} // namespace

MazeMap MazeMap::parse(std::string_view text) {
  MazeMap map;
  int starts = 0;
  int goals = 0;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    if (!map.grid_.empty() && line.size() != map.grid_.front().size())
      reject(line_no, "row width " + std::to_string(line.size()) + " differs from " +
                          std::to_string(map.grid_.front().size()));
    const int row = static_cast<int>(map.grid_.size());
    for (std::size_t col = 0; col < line.size(); ++col) {
      const char c = line[col];
      switch (c) {
      case '#':
      case '.':
        break;
      case 'S':
        map.start_ = {row, static_cast<int>(col)};
        ++starts;
        break;
      case 'G':
        map.goal_ = {row, static_cast<int>(col)};
        ++goals;
        break;
      default:
        reject(line_no, std::string("unknown cell character '") + c + "'");
      }
    }
    map.grid_.push_back(line);
  }
  if (map.grid_.empty())
    throw std::invalid_argument("maze: empty map");
  if (starts != 1)
    throw std::invalid_argument("maze: expected exactly one 'S', found " +
                                std::to_string(starts));
  if (goals != 1)
    throw std::invalid_argument("maze: expected exactly one 'G', found " +
                                std::to_string(goals));
  map.rows_ = static_cast<int>(map.grid_.size());
  map.cols_ = static_cast<int>(map.grid_.front().size());
  return map;
}

MazeMap MazeMap::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("maze: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool MazeMap::is_wall(GridCell c) const {
  if (c.row < 0 || c.col < 0 || c.row >= rows_ || c.col >= cols_)
    return true;
  return grid_[static_cast<std::size_t>(c.row)][static_cast<std::size_t>(c.col)] == '#';
}

Observation MazeMap::observe(GridCell c) const {
  Observation obs(4);
  for (int dir = 0; dir < 4; ++dir)
    obs[dir] = is_wall({c.row + kRowStep[dir], c.col + kColStep[dir]}) ? 1.0 : 0.0;
  return obs;
}

std::vector<GridCell> MazeMap::open_cells() const {
  std::vector<GridCell> cells;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (!is_wall({r, c}))
        cells.push_back({r, c});
  return cells;
}

MazeOutcome maze_step(const MazeMap &map, GridCell position, ActionId action) {
  if (action.index >= kMazeActionCount)
    throw std::invalid_argument("maze: action index out of range");
  const auto dir = action.index;
  const GridCell next{position.row + kRowStep[dir], position.col + kColStep[dir]};
  if (map.is_wall(next))
    return {position, kMazeStepReward, false};
  if (next == map.goal())
    return {next, kMazeGoalReward, true};
  return {next, kMazeStepReward, false};
}

Observation maze_sense(const MazeMap &map, GridCell position) {
  return map.observe(position);
}

MazeEnvironment::MazeEnvironment(MazeMap map, std::size_t trial_timeout)
    : map_(std::move(map)), position_(map_.start()), trial_timeout_(trial_timeout) {
  if (trial_timeout_ == 0)
    throw std::invalid_argument("maze: trial timeout must be positive");
}

EnvDescriptor MazeEnvironment::descriptor() const {
  return {kMazeActionCount, 4, 2.0};
}

Percept MazeEnvironment::reset(RandomSource &) {
  position_ = map_.start();
  return {maze_sense(map_, position_), 0.0, false};
}

Percept MazeEnvironment::step(ActionId action, RandomSource &) {
  const auto outcome = maze_step(map_, position_, action);
  position_ = outcome.position;
  return {maze_sense(map_, position_), outcome.reward, outcome.goal_reached};
}

void MazeEnvironment::new_trial(RandomSource &) { position_ = map_.start(); }

} // namespace pcnsm
