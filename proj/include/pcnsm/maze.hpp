#pragma once

#include "pcnsm/envsim.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pcnsm {

struct GridCell {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(GridCell, GridCell) = default;
};

/// Grid maze: '#' wall, '.' free, 'S' start, 'G' goal. Cells outside the grid
/// count as walls.
class MazeMap {
public:
  /// Throws std::invalid_argument (with the line number) on ragged rows,
  /// unknown characters, or a start/goal count other than one.
  static MazeMap parse(std::string_view text);
  static MazeMap load(const std::filesystem::path &path);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  GridCell start() const { return start_; }
  GridCell goal() const { return goal_; }
  bool is_wall(GridCell c) const;

  /// Wall-adjacency pattern (N, E, S, W) with 1 for a wall.
  Observation observe(GridCell c) const;

  std::vector<GridCell> open_cells() const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::string> grid_;
  GridCell start_;
  GridCell goal_;
};

enum class MazeMove : std::size_t { north = 0, east = 1, south = 2, west = 3 };

inline constexpr std::size_t kMazeActionCount = 4;
inline constexpr double kMazeStepReward = -1.0;
inline constexpr double kMazeGoalReward = 100.0;

struct MazeOutcome {
  GridCell position;
  double reward = 0.0;
  bool goal_reached = false;
};

/// Deterministic grid motion; a bump leaves the position unchanged.
MazeOutcome maze_step(const MazeMap &map, GridCell position, ActionId action);

/// Observation of `position` (maze_sense).
Observation maze_sense(const MazeMap &map, GridCell position);

class MazeEnvironment final : public Environment {
public:
  explicit MazeEnvironment(MazeMap map, std::size_t trial_timeout = 1000);

  EnvDescriptor descriptor() const override;
  Percept reset(RandomSource &placement) override;
  Percept step(ActionId action, RandomSource &noise) override;
  void new_trial(RandomSource &placement) override;
  std::size_t trial_timeout() const override { return trial_timeout_; }

  GridCell position() const { return position_; }
  const MazeMap &map() const { return map_; }

private:
  MazeMap map_;
  GridCell position_;
  std::size_t trial_timeout_;
};

} // namespace pcnsm
