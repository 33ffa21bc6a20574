#include "mcox/gridmap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mcox/error.hpp"

namespace mcox {

std::string to_string(const Cell& c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

double euclidean(Cell a, Cell b) { return std::sqrt(static_cast<double>(squared_distance(a, b))); }

GridMap::GridMap(int rows, int cols, double resolution, CellState fill)
    : rows_(rows), cols_(cols), resolution_(resolution) {
  if (rows <= 0 || cols <= 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "grid dimensions must be positive, got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  cells_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

CellState GridMap::at(Cell c) const {
  if (!in_bounds(c)) throw Error(ErrorKind::kInvalidArgument, "cell out of bounds: " + to_string(c));
  return cells_[index(c)];
}

void GridMap::set(Cell c, CellState s) {
  if (!in_bounds(c)) throw Error(ErrorKind::kInvalidArgument, "cell out of bounds: " + to_string(c));
  cells_[index(c)] = s;
}

std::size_t GridMap::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

std::vector<Cell> CellMask::cells() const {
  std::vector<Cell> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back({static_cast<int>(i / cols_), static_cast<int>(i % cols_)});
  }
  return out;
}

void trace_segment(Cell from, Cell to, const std::function<bool(Cell)>& visit) {
  const int dr = to.row - from.row, dc = to.col - from.col;
  const int nr = std::abs(dr), nc = std::abs(dc);
  const int sr = dr > 0 ? 1 : -1, sc = dc > 0 ? 1 : -1;
  Cell cur = from;
  if (!visit(cur)) return;
  // Integer form of grid traversal: the next row boundary is crossed at
  // parameter (2*ir+1)/(2*nr), the next column boundary at (2*ic+1)/(2*nc).
  // Cross-multiplying compares them exactly.
  int ir = 0, ic = 0;
  while (ir < nr || ic < nc) {
    const long long row_key = static_cast<long long>(2 * ir + 1) * nc;
    const long long col_key = static_cast<long long>(2 * ic + 1) * nr;
    if (ir < nr && ic < nc && row_key == col_key) {
      ++ir;
      ++ic;
      cur.row += sr;
      cur.col += sc;
    } else if (ic >= nc || (ir < nr && row_key < col_key)) {
      ++ir;
      cur.row += sr;
    } else {
      ++ic;
      cur.col += sc;
    }
    if (!visit(cur)) return;
  }
}

bool line_of_sight(const GridMap& map, Cell from, Cell to) {
  bool clear = true;
  trace_segment(from, to, [&](Cell c) {
    if (c == from || c == to) return true;
    if (map.in_bounds(c) && map[c] == CellState::kOccupied) {
      clear = false;
      return false;
    }
    return true;
  });
  return clear;
}

std::vector<Cell> disk_cells(const GridMap& map, Cell center, int range) {
  std::vector<Cell> out;
  const int r2 = range * range;
  for (int r = std::max(0, center.row - range); r <= std::min(map.rows() - 1, center.row + range); ++r) {
    for (int c = std::max(0, center.col - range); c <= std::min(map.cols() - 1, center.col + range); ++c) {
      if (squared_distance({r, c}, center) <= r2) out.push_back({r, c});
    }
  }
  return out;
}

GridMap new_belief(int rows, int cols, double resolution) {
  return GridMap(rows, cols, resolution, CellState::kUnknown);
}

std::vector<Observation> lidar_scan(const GridMap& truth, Cell pose, int range) {
  if (!truth.is_free(pose)) throw Error(ErrorKind::kInvalidPose, "scan pose is not a free cell: " + to_string(pose));
  if (range < 1) throw Error(ErrorKind::kInvalidArgument, "scan range must be >= 1");
  std::vector<Observation> out;
  for (Cell c : disk_cells(truth, pose, range)) {
    if (line_of_sight(truth, pose, c)) out.emplace_back(c, truth[c]);
  }
  return out;
}

void merge_into(GridMap& belief, const std::vector<Observation>& observations) {
  for (const auto& [cell, state] : observations) {
    if (state == CellState::kUnknown) {
      throw Error(ErrorKind::kInvalidObservation, "observation of Unknown state at " + to_string(cell));
    }
    belief.set(cell, state);
  }
}

GridMap merge(GridMap belief, const std::vector<Observation>& observations) {
  merge_into(belief, observations);
  return belief;
}

CellMask reachable_free(const GridMap& truth, Cell start) {
  if (!truth.is_free(start)) throw Error(ErrorKind::kInvalidArgument, "flood fill start is not free: " + to_string(start));
  CellMask seen(truth.rows(), truth.cols());
  std::deque<Cell> frontier{start};
  seen.insert(start);
  while (!frontier.empty()) {
    const Cell cur = frontier.front();
    frontier.pop_front();
    for (const auto& d : kNeighbors4) {
      const Cell n{cur.row + d[0], cur.col + d[1]};
      if (truth.is_free(n) && !seen.contains(n)) {
        seen.insert(n);
        frontier.push_back(n);
      }
    }
  }
  return seen;
}

CellMask relevant_cells(const GridMap& truth, const CellMask& reachable) {
  CellMask out = reachable;
  for (Cell c : reachable.cells()) {
    for (const auto& d : kNeighbors4) {
      const Cell n{c.row + d[0], c.col + d[1]};
      if (truth.in_bounds(n) && truth[n] == CellState::kOccupied) out.insert(n);
    }
  }
  return out;
}

namespace {

void require_same_shape(const GridMap& a, const GridMap& b) {
  if (!a.same_shape(b)) throw Error(ErrorKind::kDimensionMismatch, "belief and truth dimensions differ");
}

}  // namespace

bool exploration_complete(const GridMap& belief, const GridMap& truth, const CellMask& reachable) {
  require_same_shape(belief, truth);
  for (Cell c : relevant_cells(truth, reachable).cells()) {
    if (belief[c] == CellState::kUnknown) return false;
  }
  return true;
}

double coverage_fraction(const GridMap& belief, const GridMap& truth, const CellMask& reachable) {
  require_same_shape(belief, truth);
  const auto relevant = relevant_cells(truth, reachable).cells();
  if (relevant.empty()) throw Error(ErrorKind::kInvalidArgument, "coverage of an empty relevant set is undefined");
  std::size_t known = 0;
  for (Cell c : relevant) known += belief[c] != CellState::kUnknown;
  return static_cast<double>(known) / static_cast<double>(relevant.size());
}

}  // namespace mcox
