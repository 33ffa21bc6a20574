#pragma once

#include <vector>

#include "mcox/frontier.hpp"
#include "mcox/gridmap.hpp"

namespace mcox {

/// Per-robot ordered waypoint queues, indexed like the robot list.
struct Assignment {
  std::vector<std::vector<Cell>> queues;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Robots in ascending id order each take the unassigned candidate with the
/// smallest path distance in `belief` (ties to the earlier candidate). One
/// waypoint per robot; candidates no robot can reach are never assigned.
/// Cells in `blocked` (typically teammate positions) are impassable, except
/// for the robot standing on one.
Assignment greedy_assign(const std::vector<Cell>& candidates, const std::vector<RobotState>& robots,
                         const GridMap& belief, const std::vector<Cell>& blocked = {});
Assignment greedy_assign(const std::vector<FrontierCandidate>& candidates, const std::vector<RobotState>& robots,
                         const GridMap& belief, const std::vector<Cell>& blocked = {});

/// Each candidate goes to the robot at minimum Euclidean distance, ties to
/// the lower id. Result is indexed like `robots`; each set keeps input order.
std::vector<std::vector<Cell>> voronoi_partition(const std::vector<Cell>& candidates,
                                                 const std::vector<RobotState>& robots);

struct Tour {
  std::vector<Cell> waypoints;    // visiting order, start excluded
  std::vector<Cell> unreachable;  // targets with no path from start
  int length = 0;                 // path length in cells

  friend bool operator==(const Tour&, const Tour&) = default;
};

inline constexpr std::size_t kExactTspLimit = 9;

/// Open tour from `start` through every reachable target using path
/// distances in `belief`. Exact (Held-Karp) up to kExactTspLimit targets,
/// nearest neighbour plus 2-opt above.
Tour tsp_tour(Cell start, const std::vector<Cell>& targets, const GridMap& belief);

/// Voronoi partition followed by one tour per robot.
Assignment dvc_assign(const std::vector<Cell>& candidates, const std::vector<RobotState>& robots,
                      const GridMap& belief);
Assignment dvc_assign(const std::vector<FrontierCandidate>& candidates, const std::vector<RobotState>& robots,
                      const GridMap& belief);

std::vector<Cell> cells_of(const std::vector<FrontierCandidate>& candidates);

}  // namespace mcox
