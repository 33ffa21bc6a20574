#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace mcox {

enum class CellState : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

std::string to_string(const Cell& c);

inline int manhattan(Cell a, Cell b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }
inline int squared_distance(Cell a, Cell b) {
  const int dr = a.row - b.row, dc = a.col - b.col;
  return dr * dr + dc * dc;
}
double euclidean(Cell a, Cell b);

struct RobotState {
  int id = 0;
  Cell position;
  int detection_range = 5;  // d_det, cells
  int max_speed = 1;        // V_max, cells per timestep
};

/// Row-major occupancy grid. Also used for the ground-truth world.
class GridMap {
 public:
  GridMap(int rows, int cols, double resolution = 1.0, CellState fill = CellState::kUnknown);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(Cell c) const { return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_; }

  /// Bounds-checked access; throws Error(kInvalidArgument) when out of range.
  CellState at(Cell c) const;
  void set(Cell c, CellState s);

  // Unchecked; callers have already validated bounds.
  CellState operator[](Cell c) const { return cells_[index(c)]; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * cols_ + c.col; }
  Cell cell_at(std::size_t idx) const {
    return {static_cast<int>(idx / cols_), static_cast<int>(idx % cols_)};
  }

  bool is_free(Cell c) const { return in_bounds(c) && (*this)[c] == CellState::kFree; }
  std::size_t count(CellState s) const;
  bool same_shape(const GridMap& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

  const std::vector<CellState>& data() const { return cells_; }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cells_ == b.cells_;
  }

 private:
  int rows_;
  int cols_;
  double resolution_;
  std::vector<CellState> cells_;
};

/// Dense boolean membership over a map's footprint.
class CellMask {
 public:
  CellMask(int rows, int cols) : rows_(rows), cols_(cols), bits_(static_cast<std::size_t>(rows) * cols, 0) {}

  bool contains(Cell c) const {
    return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_ && bits_[idx(c)] != 0;
  }
  void insert(Cell c) {
    auto& b = bits_[idx(c)];
    if (!b) {
      b = 1;
      ++count_;
    }
  }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Members in row-major (lexicographic) order.
  std::vector<Cell> cells() const;

  friend bool operator==(const CellMask&, const CellMask&) = default;

 private:
  std::size_t idx(Cell c) const { return static_cast<std::size_t>(c.row) * cols_ + c.col; }

  int rows_;
  int cols_;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

using Observation = std::pair<Cell, CellState>;

inline constexpr int kNeighbors4[4][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};

/// Visits every cell whose open square the segment between the two cell
/// centres passes through, in order from `from` to `to` inclusive. A segment
/// through a lattice corner steps diagonally and touches neither side cell.
/// The visitor returns false to stop early.
void trace_segment(Cell from, Cell to, const std::function<bool(Cell)>& visit);

/// True when no Occupied cell lies strictly between `from` and `to` on the
/// traced segment. Cells outside `map` count as non-blocking.
bool line_of_sight(const GridMap& map, Cell from, Cell to);

/// All in-bounds cells within Euclidean `range` of `center`, row-major.
std::vector<Cell> disk_cells(const GridMap& map, Cell center, int range);

GridMap new_belief(int rows, int cols, double resolution = 1.0);

/// Cells a LiDAR at `pose` observes on `truth`, sorted row-major.
std::vector<Observation> lidar_scan(const GridMap& truth, Cell pose, int range);

/// Writes observed states into `belief` in place.
void merge_into(GridMap& belief, const std::vector<Observation>& observations);
GridMap merge(GridMap belief, const std::vector<Observation>& observations);

/// 4-connected flood fill over Free cells.
CellMask reachable_free(const GridMap& truth, Cell start);

/// Reachable Free cells plus Occupied cells 4-adjacent to them: the cells an
/// exploration run is expected to reveal.
CellMask relevant_cells(const GridMap& truth, const CellMask& reachable);

bool exploration_complete(const GridMap& belief, const GridMap& truth, const CellMask& reachable);
double coverage_fraction(const GridMap& belief, const GridMap& truth, const CellMask& reachable);

}  // namespace mcox
