#include "mcox/mapgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <optional>

#include "mcox/error.hpp"
#include "mcox/rng.hpp"

namespace mcox {

MapClass parse_map_class(const std::string& name) {
  if (name == "small") return MapClass::kSmall;
  if (name == "medium") return MapClass::kMedium;
  if (name == "large") return MapClass::kLarge;
  if (name == "cave" || name == "unstructured") return MapClass::kCave;
  throw Error(ErrorKind::kConfig, "unknown map class '" + name + "' (small|medium|large|cave)");
}

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::kSmall: return "small";
    case MapClass::kMedium: return "medium";
    case MapClass::kLarge: return "large";
    case MapClass::kCave: return "cave";
  }
  return "?";
}

int map_size(MapClass c) {
  switch (c) {
    case MapClass::kSmall: return 60;
    case MapClass::kMedium: return 120;
    case MapClass::kLarge: return 150;
    case MapClass::kCave: return 150;
  }
  return 60;
}

int timestep_limit(MapClass c) {
  switch (c) {
    case MapClass::kSmall: return 1000;
    case MapClass::kMedium: return 1500;
    case MapClass::kLarge: return 2000;
    case MapClass::kCave: return 2000;
  }
  return 1000;
}

StructuredMapSpec StructuredMapSpec::for_class(MapClass c, std::uint64_t seed) {
  if (c == MapClass::kCave) throw Error(ErrorKind::kInvalidArgument, "cave maps have no structured spec");
  StructuredMapSpec spec;
  spec.size = map_size(c);
  spec.corridor_width = c == MapClass::kSmall ? 4 : 5;
  spec.seed = seed;
  return spec;
}

namespace {

struct Room {
  int col0, col1;  // inclusive column span
  int height;
};

void fill_rect(GridMap& map, int r0, int r1, int c0, int c1, CellState s) {
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) map.set({r, c}, s);
}

// Rooms along one band. `toward_corridor` is the wall row between band and
// corridor; `dir` is -1 for the top band (rooms grow upward) and +1 below.
void build_band(GridMap& map, Rng& rng, const StructuredMapSpec& spec, int wall_row, int dir, int band_height) {
  const int last_col = spec.size - 2;
  std::vector<Room> rooms;
  int col = 1;
  while (last_col - col + 1 >= spec.room_min) {
    const int remaining = last_col - col + 1;
    int width = static_cast<int>(rng.uniform_int(spec.room_min, std::min(spec.room_max, remaining)));
    // Absorb a sliver that could not hold another room.
    if (remaining - width - 1 < spec.room_min && remaining <= spec.room_max) width = remaining;
    const int height = static_cast<int>(rng.uniform_int(spec.room_min, std::min(spec.room_max, band_height)));
    rooms.push_back({col, col + width - 1, height});
    col += width + 1;
  }

  for (const Room& room : rooms) {
    const int near_row = wall_row + dir;
    const int far_row = wall_row + dir * room.height;
    fill_rect(map, std::min(near_row, far_row), std::max(near_row, far_row), room.col0, room.col1, CellState::kFree);
    const int door_col = static_cast<int>(rng.uniform_int(room.col0, room.col1 - spec.door_width + 1));
    fill_rect(map, wall_row, wall_row, door_col, door_col + spec.door_width - 1, CellState::kFree);
  }

  for (std::size_t i = 0; i + 1 < rooms.size(); ++i) {
    const Room& a = rooms[i];
    const Room& b = rooms[i + 1];
    const bool connect = rng.bernoulli(spec.door_probability);
    if (!connect || b.col0 != a.col1 + 2) continue;
    const int shared = std::min(a.height, b.height);
    const int offset = static_cast<int>(rng.uniform_int(1, shared - spec.door_width + 1));
    for (int k = 0; k < spec.door_width; ++k) map.set({wall_row + dir * (offset + k), a.col1 + 1}, CellState::kFree);
  }
}

}  // namespace

GeneratedMap gen_structured(const StructuredMapSpec& spec) {
  if (spec.door_probability < 0.0 || spec.door_probability > 1.0) {
    throw Error(ErrorKind::kGeneration, "door probability must lie in [0, 1]");
  }
  if (spec.room_min < spec.door_width + 1 || spec.room_max < spec.room_min || spec.door_width < 1 ||
      spec.corridor_width < 1) {
    throw Error(ErrorKind::kGeneration, "inconsistent room/door/corridor dimensions");
  }
  const int size = spec.size;
  const int corridor_top = (size - spec.corridor_width) / 2;
  const int top_band = corridor_top - 2;
  const int bottom_band = size - corridor_top - spec.corridor_width - 2;
  if (std::min(top_band, bottom_band) < spec.room_min || size - 2 < spec.room_min) {
    throw Error(ErrorKind::kGeneration, "map of size " + std::to_string(size) + " cannot fit one room");
  }

  GridMap map(size, size, 1.0, CellState::kOccupied);
  Rng rng(spec.seed);
  fill_rect(map, corridor_top, corridor_top + spec.corridor_width - 1, 1, size - 2, CellState::kFree);
  build_band(map, rng, spec, corridor_top - 1, -1, top_band);
  build_band(map, rng, spec, corridor_top + spec.corridor_width, +1, bottom_band);

  std::vector<Cell> deploy;
  for (int r = corridor_top; r < corridor_top + spec.corridor_width; ++r)
    for (int c = 1; c <= spec.corridor_width; ++c) deploy.push_back({r, c});
  return {std::move(map), std::move(deploy)};
}

namespace {

void carve_disk(GridMap& map, double row, double col, double radius, std::size_t& free_count) {
  const int rr = static_cast<int>(std::lround(row)), cc = static_cast<int>(std::lround(col));
  const int reach = static_cast<int>(std::ceil(radius));
  const double r2 = radius * radius;
  for (int r = rr - reach; r <= rr + reach; ++r) {
    for (int c = cc - reach; c <= cc + reach; ++c) {
      if (r < 1 || c < 1 || r > map.rows() - 2 || c > map.cols() - 2) continue;
      const double dr = r - rr, dc = c - cc;
      if (dr * dr + dc * dc > r2) continue;
      if (map[{r, c}] != CellState::kFree) {
        map.set({r, c}, CellState::kFree);
        ++free_count;
      }
    }
  }
}

std::size_t keep_component(GridMap& map, Cell anchor) {
  const CellMask keep = reachable_free(map, anchor);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Cell c = map.cell_at(i);
    if (map[c] == CellState::kFree && !keep.contains(c)) map.set(c, CellState::kOccupied);
  }
  return keep.size();
}

std::optional<GeneratedMap> try_cave(const UnstructuredMapSpec& spec, std::uint64_t seed) {
  const int n = spec.size;
  GridMap map(n, n, 1.0, CellState::kOccupied);
  Rng rng(seed);
  std::size_t free_count = 0;

  const int mid = n / 2;
  std::vector<Cell> deploy;
  for (int r = mid - 2; r <= mid + 1; ++r)
    for (int c = 2; c <= 5; ++c) deploy.push_back({r, c});
  for (Cell c : deploy) {
    map.set(c, CellState::kFree);
    ++free_count;
  }

  const double total = static_cast<double>(n) * n;
  const double target_fraction =
      spec.min_free_fraction + (spec.max_free_fraction - spec.min_free_fraction) * rng.uniform01();
  const auto target = static_cast<std::size_t>(target_fraction * total);
  const int branches = static_cast<int>(rng.uniform_int(spec.min_branches, spec.max_branches));
  const std::size_t share = target / static_cast<std::size_t>(branches + 1);

  std::vector<std::pair<double, double>> carved_path;  // walker positions, for branch roots
  const double margin = 2.0 + spec.max_tunnel_width / 2.0;

  auto walk = [&](double row, double col, double heading, std::size_t budget) {
    const std::size_t goal = std::min(target, free_count + budget);
    double radius = rng.uniform_int(spec.min_tunnel_width, spec.max_tunnel_width) / 2.0;
    const std::size_t max_steps = budget * 4 + 100;
    for (std::size_t step = 0; step < max_steps && free_count < goal; ++step) {
      if (step % 8 == 0) radius = rng.uniform_int(spec.min_tunnel_width, spec.max_tunnel_width) / 2.0;
      heading += (rng.uniform01() * 2.0 - 1.0) * spec.turn_amplitude;
      double nr = row + std::sin(heading);
      double nc = col + std::cos(heading);
      if (nr < margin || nr > n - 1 - margin) {
        heading = -heading;
        nr = row + std::sin(heading);
      }
      if (nc < margin || nc > n - 1 - margin) {
        heading = std::numbers::pi - heading;
        nc = col + std::cos(heading);
      }
      row = std::clamp(nr, margin, n - 1 - margin);
      col = std::clamp(nc, margin, n - 1 - margin);
      carve_disk(map, row, col, radius, free_count);
      carved_path.emplace_back(row, col);
    }
  };

  walk(mid - 0.5, 5.0, (rng.uniform01() - 0.5) * 0.5, share);
  // Branches, then extra branches while below target.
  for (int b = 0; b < branches + 64 && free_count < target; ++b) {
    const auto& root = carved_path[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(carved_path.size()) - 1))];
    walk(root.first, root.second, rng.uniform01() * 2.0 * std::numbers::pi, share);
  }

  const std::size_t kept = keep_component(map, deploy.front());
  const double fraction = static_cast<double>(kept) / total;
  if (fraction < 0.3 || fraction > 0.7) return std::nullopt;
  return GeneratedMap{std::move(map), std::move(deploy)};
}

}  // namespace

GeneratedMap gen_unstructured(const UnstructuredMapSpec& spec) {
  if (spec.size < 20 || spec.min_tunnel_width < 1 || spec.max_tunnel_width < spec.min_tunnel_width ||
      spec.min_branches < 0 || spec.max_branches < spec.min_branches) {
    throw Error(ErrorKind::kGeneration, "invalid cave spec");
  }
  std::uint64_t seed = spec.seed;
  for (int attempt = 0; attempt <= spec.max_retries; ++attempt) {
    if (auto out = try_cave(spec, seed)) return std::move(*out);
    seed = mix_seed(seed, static_cast<std::uint64_t>(attempt) + 1);
  }
  throw Error(ErrorKind::kGeneration, "cave generation failed connectivity/coverage repair after " +
                                          std::to_string(spec.max_retries) + " retries");
}

GeneratedMap generate(MapClass c, std::uint64_t seed) {
  if (c == MapClass::kCave) {
    UnstructuredMapSpec spec;
    spec.seed = seed;
    return gen_unstructured(spec);
  }
  return gen_structured(StructuredMapSpec::for_class(c, seed));
}

std::vector<int> bfs_distances(const GridMap& map, Cell source) {
  std::vector<int> dist(map.size(), -1);
  if (!map.is_free(source)) return dist;
  std::deque<Cell> queue{source};
  dist[map.index(source)] = 0;
  while (!queue.empty()) {
    const Cell cur = queue.front();
    queue.pop_front();
    const int d = dist[map.index(cur)];
    for (const auto& off : kNeighbors4) {
      const Cell n{cur.row + off[0], cur.col + off[1]};
      if (map.is_free(n) && dist[map.index(n)] < 0) {
        dist[map.index(n)] = d + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

Cell deploy_anchor(const std::vector<Cell>& deploy_zone) {
  if (deploy_zone.empty()) throw Error(ErrorKind::kInvalidArgument, "empty deploy zone");
  double sr = 0, sc = 0;
  for (Cell c : deploy_zone) {
    sr += c.row;
    sc += c.col;
  }
  sr /= static_cast<double>(deploy_zone.size());
  sc /= static_cast<double>(deploy_zone.size());
  Cell best = deploy_zone.front();
  double best_d = 1e300;
  for (Cell c : deploy_zone) {
    const double d = (c.row - sr) * (c.row - sr) + (c.col - sc) * (c.col - sc);
    if (d < best_d || (d == best_d && c < best)) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

Cell sample_target(const GridMap& truth, const std::vector<Cell>& deploy_zone, std::uint64_t seed, DistanceBand band) {
  if (band.min < 0 || band.max < band.min) throw Error(ErrorKind::kInvalidArgument, "distance band must satisfy 0 <= min <= max");
  const Cell anchor = deploy_anchor(deploy_zone);
  const auto dist = bfs_distances(truth, anchor);
  std::vector<Cell> candidates;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] >= band.min && dist[i] <= band.max) candidates.push_back(truth.cell_at(i));
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::kNoCandidate, "no reachable free cell at distance [" + std::to_string(band.min) + ", " +
                                             std::to_string(band.max) + "]");
  }
  Rng rng(seed);
  return candidates[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1))];
}

}  // namespace mcox
