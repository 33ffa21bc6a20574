#pragma once

#include <optional>
#include <vector>

#include "mcox/gridmap.hpp"

namespace mcox {

/// Start to goal inclusive; consecutive cells are 4-adjacent.
using Path = std::vector<Cell>;

/// Another robot treated as a circular obstacle. A cell is blocked when its
/// centre lies strictly inside the disk.
struct ObstacleDisk {
  Cell center;
  double radius = 1.0;
};
using DynamicObstacleSet = std::vector<ObstacleDisk>;

inline constexpr double kSafeDistance = 1.0;  // d_safe

bool blocked(const DynamicObstacleSet& obstacles, Cell c);

/// Shortest 4-connected path over Free belief cells avoiding the obstacle
/// disks (A*, Manhattan heuristic, ties by row-major cell order). Throws
/// Error(kUnreachable) when the goal is out of bounds, not Free, blocked or
/// disconnected; Error(kInvalidArgument) when the start is not usable.
Path plan_path(const GridMap& belief, Cell start, Cell goal, const DynamicObstacleSet& obstacles = {});

std::optional<Path> try_plan_path(const GridMap& belief, Cell start, Cell goal,
                                  const DynamicObstacleSet& obstacles = {});

bool is_reachable(const GridMap& belief, Cell start, Cell goal, const DynamicObstacleSet& obstacles = {});

struct AdvanceResult {
  Cell position;
  Path remaining;  // begins at `position`
};

/// Moves up to `speed` cells along `path` (which must start at `position`).
AdvanceResult advance(Cell position, const Path& path, int speed);

}  // namespace mcox
