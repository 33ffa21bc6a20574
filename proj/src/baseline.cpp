#include "mcox/baseline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mcox/mapgen.hpp"

namespace mcox {

std::vector<Cell> cells_of(const std::vector<FrontierCandidate>& candidates) {
  std::vector<Cell> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(c.cell);
  return out;
}

namespace {

std::vector<std::size_t> id_order(const std::vector<RobotState>& robots) {
  std::vector<std::size_t> order(robots.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return robots[a].id < robots[b].id; });
  return order;
}

}  // namespace

Assignment greedy_assign(const std::vector<Cell>& candidates, const std::vector<RobotState>& robots,
                         const GridMap& belief, const std::vector<Cell>& blocked) {
  Assignment out;
  out.queues.resize(robots.size());
  std::vector<bool> taken(candidates.size(), false);
  for (std::size_t i : id_order(robots)) {
    std::vector<int> dist;
    if (blocked.empty()) {
      dist = bfs_distances(belief, robots[i].position);
    } else {
      GridMap walls = belief;
      for (Cell b : blocked) {
        if (walls.in_bounds(b) && b != robots[i].position) walls.set(b, CellState::kOccupied);
      }
      dist = bfs_distances(walls, robots[i].position);
    }
    int best = -1;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (taken[k] || !belief.in_bounds(candidates[k])) continue;
      const int d = dist[belief.index(candidates[k])];
      if (d >= 0 && (best < 0 || d < best)) {
        best = d;
        best_k = k;
      }
    }
    if (best < 0) continue;
    taken[best_k] = true;
    out.queues[i].push_back(candidates[best_k]);
  }
  return out;
}

Assignment greedy_assign(const std::vector<FrontierCandidate>& candidates, const std::vector<RobotState>& robots,
                         const GridMap& belief, const std::vector<Cell>& blocked) {
  return greedy_assign(cells_of(candidates), robots, belief, blocked);
}

std::vector<std::vector<Cell>> voronoi_partition(const std::vector<Cell>& candidates,
                                                 const std::vector<RobotState>& robots) {
  std::vector<std::vector<Cell>> parts(robots.size());
  if (robots.empty()) return parts;
  const auto order = id_order(robots);
  for (Cell c : candidates) {
    std::size_t best = order.front();
    int best_d = std::numeric_limits<int>::max();
    for (std::size_t i : order) {
      const int d = squared_distance(robots[i].position, c);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    parts[best].push_back(c);
  }
  return parts;
}

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

std::vector<Cell> held_karp(const std::vector<int>& from_start, const std::vector<std::vector<int>>& d,
                            const std::vector<Cell>& targets) {
  const std::size_t n = targets.size();
  const std::size_t full = (std::size_t{1} << n);
  std::vector<int> dp(full * n, kInf);
  std::vector<int> prev(full * n, -1);
  for (std::size_t j = 0; j < n; ++j) dp[(std::size_t{1} << j) * n + j] = from_start[j];
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const int cur = dp[mask * n + j];
      if (cur >= kInf) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const int cand = cur + d[j][k];
        if (cand < dp[next * n + k]) {
          dp[next * n + k] = cand;
          prev[next * n + k] = static_cast<int>(j);
        }
      }
    }
  }
  std::size_t last = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (dp[(full - 1) * n + j] < dp[(full - 1) * n + last]) last = j;
  }
  std::vector<Cell> order;
  std::size_t mask = full - 1;
  int j = static_cast<int>(last);
  while (j >= 0) {
    order.push_back(targets[static_cast<std::size_t>(j)]);
    const int p = prev[mask * n + static_cast<std::size_t>(j)];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  std::reverse(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> nearest_neighbour_two_opt(const std::vector<int>& from_start,
                                                   const std::vector<std::vector<int>>& d) {
  const std::size_t n = from_start.size();
  std::vector<std::size_t> order;
  std::vector<bool> used(n, false);
  int here = -1;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = 0;
    int best_d = kInf + 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k]) continue;
      const int dk = here < 0 ? from_start[k] : d[static_cast<std::size_t>(here)][k];
      if (dk < best_d) {
        best_d = dk;
        best = k;
      }
    }
    used[best] = true;
    order.push_back(best);
    here = static_cast<int>(best);
  }

  // Open-path 2-opt: position -1 is the fixed start.
  auto dist = [&](int a, std::size_t b) { return a < 0 ? from_start[b] : d[static_cast<std::size_t>(a)][b]; };
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < n && !improved; ++i) {
      const int before = i == 0 ? -1 : static_cast<int>(order[i - 1]);
      for (std::size_t j = i + 1; j < n; ++j) {
        int delta = dist(before, order[j]) - dist(before, order[i]);
        if (j + 1 < n) delta += d[order[i]][order[j + 1]] - d[order[j]][order[j + 1]];
        if (delta < 0) {
          std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
          break;
        }
      }
    }
  }
  return order;
}

}  // namespace

Tour tsp_tour(Cell start, const std::vector<Cell>& targets, const GridMap& belief) {
  Tour tour;
  if (targets.empty()) return tour;
  const auto start_dist = bfs_distances(belief, start);
  std::vector<Cell> reachable;
  std::vector<int> from_start;
  for (Cell t : targets) {
    if (std::find(reachable.begin(), reachable.end(), t) != reachable.end()) continue;
    const int d = belief.in_bounds(t) ? start_dist[belief.index(t)] : -1;
    if (d < 0) {
      tour.unreachable.push_back(t);
    } else {
      reachable.push_back(t);
      from_start.push_back(d);
    }
  }
  const std::size_t n = reachable.size();
  if (n == 0) return tour;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto di = bfs_distances(belief, reachable[i]);
    for (std::size_t j = 0; j < n; ++j) d[i][j] = di[belief.index(reachable[j])];
  }

  if (n <= kExactTspLimit) {
    tour.waypoints = held_karp(from_start, d, reachable);
  } else {
    for (std::size_t k : nearest_neighbour_two_opt(from_start, d)) tour.waypoints.push_back(reachable[k]);
  }
  // Length from the chosen order.
  auto index_of = [&](Cell c) {
    return static_cast<std::size_t>(std::find(reachable.begin(), reachable.end(), c) - reachable.begin());
  };
  std::size_t prev = index_of(tour.waypoints.front());
  tour.length = from_start[prev];
  for (std::size_t k = 1; k < tour.waypoints.size(); ++k) {
    const std::size_t cur = index_of(tour.waypoints[k]);
    tour.length += d[prev][cur];
    prev = cur;
  }
  return tour;
}

Assignment dvc_assign(const std::vector<Cell>& candidates, const std::vector<RobotState>& robots,
                      const GridMap& belief) {
  Assignment out;
  const auto parts = voronoi_partition(candidates, robots);
  out.queues.resize(robots.size());
  for (std::size_t i = 0; i < robots.size(); ++i) {
    out.queues[i] = tsp_tour(robots[i].position, parts[i], belief).waypoints;
  }
  return out;
}

Assignment dvc_assign(const std::vector<FrontierCandidate>& candidates, const std::vector<RobotState>& robots,
                      const GridMap& belief) {
  return dvc_assign(cells_of(candidates), robots, belief);
}

}  // namespace mcox
