#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcox/gridmap.hpp"

namespace mcox {

enum class MapClass { kSmall, kMedium, kLarge, kCave };

MapClass parse_map_class(const std::string& name);
std::string to_string(MapClass c);
/// Edge length of the square map for a class (cave maps are 150).
int map_size(MapClass c);
/// Episode timestep limit for a class: 1000 / 1500 / 2000, caves use 2000.
int timestep_limit(MapClass c);

struct GeneratedMap {
  GridMap map;
  std::vector<Cell> deploy_zone;
};

/// Corridor-and-rooms building layout.
struct StructuredMapSpec {
  int size = 60;
  int corridor_width = 4;
  double door_probability = 0.5;  // inter-room door per adjacent pair
  int room_min = 8;
  int room_max = 20;
  int door_width = 2;
  std::uint64_t seed = 0;

  static StructuredMapSpec for_class(MapClass c, std::uint64_t seed);
};

/// Cave-like layout carved by wandering tunnels.
struct UnstructuredMapSpec {
  int size = 150;
  int min_tunnel_width = 2;
  int max_tunnel_width = 6;
  int min_branches = 3;
  int max_branches = 6;
  double turn_amplitude = 0.35;  // max heading change per step, radians
  double min_free_fraction = 0.35;
  double max_free_fraction = 0.5;
  int max_retries = 8;
  std::uint64_t seed = 0;
};

GeneratedMap gen_structured(const StructuredMapSpec& spec);
GeneratedMap gen_unstructured(const UnstructuredMapSpec& spec);
GeneratedMap generate(MapClass c, std::uint64_t seed);

struct DistanceBand {
  int min = 0;
  int max = 0;
};

/// Deploy cell closest to the zone's arithmetic centroid (ties row-major).
Cell deploy_anchor(const std::vector<Cell>& deploy_zone);

/// Free cell whose 4-connected path distance from the deploy anchor lies in
/// `band`, drawn uniformly with `seed`.
Cell sample_target(const GridMap& truth, const std::vector<Cell>& deploy_zone, std::uint64_t seed, DistanceBand band);

/// 4-connected path distances over Free cells from `source`; -1 where unreachable.
std::vector<int> bfs_distances(const GridMap& map, Cell source);

}  // namespace mcox
