#include "mcox/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcox/error.hpp"
#include "mcox/mapgen.hpp"
#include "mcox/rng.hpp"

namespace mcox {

void validate(const FrontierParams& p) {
  if (p.keep < 1 || p.samples < p.keep || p.cost_weight < 0.0 || p.min_separation < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "frontier params need samples >= keep >= 1, lambda >= 0, d_sep >= 0");
  }
}

std::vector<Cell> frontier_cells(const GridMap& belief) {
  std::vector<Cell> out;
  for (int r = 0; r < belief.rows(); ++r) {
    for (int c = 0; c < belief.cols(); ++c) {
      if (belief[{r, c}] != CellState::kFree) continue;
      for (const auto& d : kNeighbors4) {
        const Cell n{r + d[0], c + d[1]};
        if (belief.in_bounds(n) && belief[n] == CellState::kUnknown) {
          out.push_back({r, c});
          break;
        }
      }
    }
  }
  return out;
}

double info_gain(const GridMap& belief, Cell g, int range) {
  if (!belief.in_bounds(g)) throw Error(ErrorKind::kInvalidArgument, "info gain cell out of bounds: " + to_string(g));
  const auto disk = disk_cells(belief, g, range);
  std::size_t unknown = 0;
  for (Cell c : disk) {
    if (belief[c] == CellState::kUnknown && line_of_sight(belief, g, c)) ++unknown;
  }
  return static_cast<double>(unknown) / static_cast<double>(disk.size());
}

std::vector<TravelCost> travel_costs(const GridMap& belief, const std::vector<RobotState>& robots,
                                     const std::vector<Cell>& targets) {
  std::vector<TravelCost> out(targets.size());
  if (robots.empty()) return out;
  std::vector<std::vector<int>> dist;
  dist.reserve(robots.size());
  for (const auto& r : robots) dist.push_back(bfs_distances(belief, r.position));

  for (std::size_t t = 0; t < targets.size(); ++t) {
    const std::size_t idx = belief.index(targets[t]);
    int best = -1;
    std::size_t best_robot = 0;
    for (std::size_t i = 0; i < robots.size(); ++i) {
      const int d = dist[i][idx];
      if (d >= 0 && (best < 0 || d < best)) {
        best = d;
        best_robot = i;
      }
    }
    if (best >= 0) {
      out[t] = {static_cast<double>(best), best_robot};
      continue;
    }
    int best_sq = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < robots.size(); ++i) {
      const int d = squared_distance(robots[i].position, targets[t]);
      if (d < best_sq) {
        best_sq = d;
        best_robot = i;
      }
    }
    out[t] = {std::sqrt(static_cast<double>(best_sq)), best_robot};
  }
  return out;
}

std::vector<FrontierCandidate> separate(const std::vector<FrontierCandidate>& ordered, double min_separation,
                                        std::size_t keep) {
  std::vector<FrontierCandidate> chosen;
  const double sep2 = min_separation * min_separation;
  for (const auto& cand : ordered) {
    if (chosen.size() >= keep) break;
    const bool clear = std::all_of(chosen.begin(), chosen.end(), [&](const FrontierCandidate& other) {
      return static_cast<double>(squared_distance(other.cell, cand.cell)) >= sep2;
    });
    if (clear) chosen.push_back(cand);
  }
  return chosen;
}

std::vector<FrontierCandidate> rank_and_select(const GridMap& belief, const std::vector<RobotState>& robots,
                                               const FrontierParams& params, std::uint64_t seed) {
  validate(params);
  auto frontier = frontier_cells(belief);
  if (frontier.empty()) return {};
  Rng rng(seed);
  auto sampled = rng.sample(std::move(frontier), static_cast<std::size_t>(params.samples));

  const auto costs = travel_costs(belief, robots, sampled);
  std::vector<FrontierCandidate> scored;
  scored.reserve(sampled.size());
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const int range = robots.empty() ? 5 : robots[costs[i].robot].detection_range;
    FrontierCandidate c;
    c.cell = sampled[i];
    c.info_gain = info_gain(belief, c.cell, range);
    c.cost = costs[i].distance;
    c.utility = c.info_gain - params.cost_weight * c.cost;
    scored.push_back(c);
  }
  std::sort(scored.begin(), scored.end(), [](const FrontierCandidate& a, const FrontierCandidate& b) {
    if (a.utility != b.utility) return a.utility > b.utility;
    return a.cell < b.cell;
  });
  return separate(scored, params.min_separation, static_cast<std::size_t>(params.keep));
}

std::vector<Cell> mean_shift_frontiers(const GridMap& belief, const MeanShiftParams& params) {
  if (params.bandwidth <= 0.0) throw Error(ErrorKind::kInvalidArgument, "mean-shift bandwidth must be positive");
  const auto points = frontier_cells(belief);
  if (points.empty()) return {};
  const double bw2 = params.bandwidth * params.bandwidth;

  struct Mode {
    double row, col;
    int members;
  };
  std::vector<Mode> modes;
  for (Cell p : points) {
    double mr = p.row, mc = p.col;
    for (int it = 0; it < params.max_iterations; ++it) {
      double sr = 0, sc = 0;
      int n = 0;
      for (Cell q : points) {
        const double dr = q.row - mr, dc = q.col - mc;
        if (dr * dr + dc * dc <= bw2) {
          sr += q.row;
          sc += q.col;
          ++n;
        }
      }
      // n >= 1 while the mode sits on its seed point; later it stays within
      // bandwidth of at least one point since it moves to a mean of points.
      if (n == 0) break;
      const double nr = sr / n, nc = sc / n;
      const double shift = std::hypot(nr - mr, nc - mc);
      mr = nr;
      mc = nc;
      if (shift < params.tolerance) break;
    }
    const double merge2 = bw2 / 4.0;
    auto it = std::find_if(modes.begin(), modes.end(), [&](const Mode& m) {
      const double dr = m.row - mr, dc = m.col - mc;
      return dr * dr + dc * dc <= merge2;
    });
    if (it == modes.end()) {
      modes.push_back({mr, mc, 1});
    } else {
      ++it->members;
    }
  }

  struct Snapped {
    Cell cell;
    int members;
  };
  std::vector<Snapped> out;
  for (const Mode& m : modes) {
    if (m.members < params.min_cluster) continue;
    Cell best = points.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (Cell p : points) {
      const double d = (p.row - m.row) * (p.row - m.row) + (p.col - m.col) * (p.col - m.col);
      if (d < best_d) {  // points are row-major, so the first minimum wins ties
        best_d = d;
        best = p;
      }
    }
    auto dup = std::find_if(out.begin(), out.end(), [&](const Snapped& s) { return s.cell == best; });
    if (dup == out.end()) {
      out.push_back({best, m.members});
    } else {
      dup->members += m.members;
    }
  }
  std::sort(out.begin(), out.end(), [](const Snapped& a, const Snapped& b) {
    if (a.members != b.members) return a.members > b.members;
    return a.cell < b.cell;
  });
  std::vector<Cell> cells;
  cells.reserve(out.size());
  for (const auto& s : out) cells.push_back(s.cell);
  return cells;
}

}  // namespace mcox
