#include "mcox/nav.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "mcox/error.hpp"

namespace mcox {

bool blocked(const DynamicObstacleSet& obstacles, Cell c) {
  return std::any_of(obstacles.begin(), obstacles.end(), [&](const ObstacleDisk& o) {
    return static_cast<double>(squared_distance(o.center, c)) < o.radius * o.radius;
  });
}

std::optional<Path> try_plan_path(const GridMap& belief, Cell start, Cell goal, const DynamicObstacleSet& obstacles) {
  if (!belief.is_free(start) || blocked(obstacles, start)) {
    throw Error(ErrorKind::kInvalidArgument, "path start must be free and clear of obstacles: " + to_string(start));
  }
  if (!belief.is_free(goal) || blocked(obstacles, goal)) return std::nullopt;
  if (start == goal) return Path{start};

  const std::size_t n = belief.size();
  std::vector<int> g(n, -1);
  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  // (f, row, col): min-heap gives the smallest f, then row-major order.
  using Entry = std::tuple<int, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  g[belief.index(start)] = 0;
  open.emplace(manhattan(start, goal), start.row, start.col);
  while (!open.empty()) {
    const auto [f, row, col] = open.top();
    open.pop();
    const Cell cur{row, col};
    const std::size_t ci = belief.index(cur);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (cur == goal) break;
    for (const auto& d : kNeighbors4) {
      const Cell nb{row + d[0], col + d[1]};
      if (!belief.is_free(nb) || blocked(obstacles, nb)) continue;
      const std::size_t ni = belief.index(nb);
      if (closed[ni]) continue;
      const int cand = g[ci] + 1;
      if (g[ni] < 0 || cand < g[ni]) {
        g[ni] = cand;
        parent[ni] = static_cast<std::int32_t>(ci);
        open.emplace(cand + manhattan(nb, goal), nb.row, nb.col);
      }
    }
  }
  const std::size_t gi = belief.index(goal);
  if (!closed[gi]) return std::nullopt;
  Path path;
  for (std::int64_t i = static_cast<std::int64_t>(gi); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    path.push_back(belief.cell_at(static_cast<std::size_t>(i)));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Path plan_path(const GridMap& belief, Cell start, Cell goal, const DynamicObstacleSet& obstacles) {
  if (!belief.in_bounds(goal)) throw Error(ErrorKind::kUnreachable, "goal out of bounds: " + to_string(goal));
  auto path = try_plan_path(belief, start, goal, obstacles);
  if (!path) throw Error(ErrorKind::kUnreachable, "no path from " + to_string(start) + " to " + to_string(goal));
  return std::move(*path);
}

bool is_reachable(const GridMap& belief, Cell start, Cell goal, const DynamicObstacleSet& obstacles) {
  if (!belief.in_bounds(goal)) return false;
  try {
    return try_plan_path(belief, start, goal, obstacles).has_value();
  } catch (const Error&) {
    return false;
  }
}

AdvanceResult advance(Cell position, const Path& path, int speed) {
  if (speed < 1) throw Error(ErrorKind::kInvalidArgument, "speed must be >= 1");
  if (path.empty()) return {position, {}};
  if (path.front() != position) {
    throw Error(ErrorKind::kInvalidArgument, "path does not start at the robot position " + to_string(position));
  }
  const std::size_t moves = std::min<std::size_t>(static_cast<std::size_t>(speed), path.size() - 1);
  return {path[moves], Path(path.begin() + static_cast<std::ptrdiff_t>(moves), path.end())};
}

}  // namespace mcox
