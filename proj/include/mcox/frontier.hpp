#pragma once

#include <cstdint>
#include <vector>

#include "mcox/gridmap.hpp"

namespace mcox {

/// A scored frontier cell: utility = info_gain - cost_weight * cost.
struct FrontierCandidate {
  Cell cell;
  double info_gain = 0.0;  // s(g), fraction of the sensing disk still Unknown
  double cost = 0.0;       // c(g), distance to the closest robot
  double utility = 0.0;    // U(g)

  friend bool operator==(const FrontierCandidate&, const FrontierCandidate&) = default;
};

struct FrontierParams {
  int samples = 200;            // H_f
  int keep = 8;                 // K_f
  double cost_weight = 0.01;    // lambda
  double min_separation = 5.0;  // d_sep, Euclidean cells
};

void validate(const FrontierParams& p);

/// Free cells with at least one Unknown 4-neighbour, row-major.
std::vector<Cell> frontier_cells(const GridMap& belief);

/// Fraction of in-bounds cells within `range` of `g` that are Unknown and
/// visible from `g` (only Occupied cells occlude).
double info_gain(const GridMap& belief, Cell g, int range);

/// Distance from the closest robot to each target, plus that robot's index.
/// Path distance over Free belief cells; when no robot has a path to a
/// target, the Euclidean distance to the closest robot is used instead.
struct TravelCost {
  double distance = 0.0;
  std::size_t robot = 0;
};
std::vector<TravelCost> travel_costs(const GridMap& belief, const std::vector<RobotState>& robots,
                                     const std::vector<Cell>& targets);

/// Samples up to `samples` frontier cells, scores them, and greedily keeps the
/// best `keep` that are pairwise at least `min_separation` apart. The info
/// gain of a cell uses the detection range of its closest robot. Output is
/// sorted by descending utility, ties by cell.
std::vector<FrontierCandidate> rank_and_select(const GridMap& belief, const std::vector<RobotState>& robots,
                                               const FrontierParams& params, std::uint64_t seed);

/// Greedy separation filter over an already ordered list.
std::vector<FrontierCandidate> separate(const std::vector<FrontierCandidate>& ordered, double min_separation,
                                        std::size_t keep);

struct MeanShiftParams {
  double bandwidth = 6.0;
  int min_cluster = 4;
  int max_iterations = 100;
  double tolerance = 0.01;
};

/// Flat-kernel mean shift over frontier coordinates. Modes closer than
/// bandwidth/2 are merged; clusters under `min_cluster` members are dropped.
/// Each surviving mode is snapped to its nearest frontier cell. Ordered by
/// descending cluster size, ties by cell.
std::vector<Cell> mean_shift_frontiers(const GridMap& belief, const MeanShiftParams& params = {});

}  // namespace mcox
