#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mcox/gridmap.hpp"

namespace mcox {

struct DoorwayCandidate {
  Cell midpoint;
  double axis_deg = 0.0;  // direction of travel through the gap, in [0, 180)
  double width = 0.0;     // clear width between the two wall hits, cells
  double info_gain = 0.0;

  friend bool operator==(const DoorwayCandidate&, const DoorwayCandidate&) = default;
};

struct DoorwayParams {
  int samples = 100;         // H_d
  int directions = 8;        // Q, even, >= 4
  double max_width = 5.0;    // w_max
  double ray_length = 8.0;   // L
  double min_gain = 0.15;
  double min_separation = 5.0;
  double symmetry_tolerance = 2.0;  // allowed |d1 - d2| between paired hits
};

void validate(const DoorwayParams& p);

/// Result of probing one cell: the narrowest symmetric wall pair, if any.
struct GapProbe {
  Cell wall_a;
  Cell wall_b;
  double probe_deg = 0.0;
  double width = 0.0;
};

/// Casts the Q rays from `origin` through Free/Unknown cells and returns the
/// narrowest opposite pair that hits Occupied cells on both sides within the
/// ray length, symmetric within tolerance and no wider than max_width.
std::optional<GapProbe> probe_gap(const GridMap& belief, Cell origin, const DoorwayParams& params);

/// Samples frontier cells, probes each for a narrow symmetric wall gap, and
/// returns gap midpoints whose info gain clears `min_gain`, ordered by
/// descending gain and thinned to `min_separation`.
std::vector<DoorwayCandidate> detect_doorways(const GridMap& belief, const DoorwayParams& params, int range,
                                              std::uint64_t seed);

}  // namespace mcox
