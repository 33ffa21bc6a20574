#include "mcox/doorway.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcox/error.hpp"
#include "mcox/frontier.hpp"
#include "mcox/rng.hpp"

namespace mcox {

void validate(const DoorwayParams& p) {
  if (p.directions < 4 || p.directions % 2 != 0 || p.max_width < 2.0 || p.samples < 1 || p.ray_length <= 0.0 ||
      p.min_separation < 0.0 || p.symmetry_tolerance < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "doorway params need Q >= 4 even, w_max >= 2, H_d >= 1, L > 0");
  }
}

namespace {

struct RayHit {
  Cell cell;
  double distance;
};

// Angle 0 points east (+col), 90 north (-row).
std::optional<RayHit> cast_ray(const GridMap& map, Cell origin, double deg, double length) {
  const double rad = deg * std::numbers::pi / 180.0;
  const Cell end{origin.row + static_cast<int>(std::lround(-std::sin(rad) * length)),
                 origin.col + static_cast<int>(std::lround(std::cos(rad) * length))};
  std::optional<RayHit> hit;
  trace_segment(origin, end, [&](Cell c) {
    if (c == origin) return true;
    if (!map.in_bounds(c)) return false;
    if (map[c] == CellState::kOccupied) {
      const double d = euclidean(origin, c);
      if (d <= length) hit = RayHit{c, d};
      return false;
    }
    return true;
  });
  return hit;
}

std::optional<Cell> nearest_free(const GridMap& map, Cell from, double radius) {
  std::optional<Cell> best;
  int best_d = 0;
  const int reach = static_cast<int>(std::ceil(radius));
  for (int r = from.row - reach; r <= from.row + reach; ++r) {
    for (int c = from.col - reach; c <= from.col + reach; ++c) {
      const Cell cell{r, c};
      const int d = squared_distance(cell, from);
      if (d > radius * radius || !map.is_free(cell)) continue;
      if (!best || d < best_d) {  // row-major scan keeps the first on ties
        best = cell;
        best_d = d;
      }
    }
  }
  return best;
}

}  // namespace

std::optional<GapProbe> probe_gap(const GridMap& belief, Cell origin, const DoorwayParams& params) {
  std::optional<GapProbe> best;
  const int pairs = params.directions / 2;
  for (int k = 0; k < pairs; ++k) {
    const double deg = 360.0 * k / params.directions;
    const auto a = cast_ray(belief, origin, deg, params.ray_length);
    if (!a) continue;
    const auto b = cast_ray(belief, origin, deg + 180.0, params.ray_length);
    if (!b) continue;
    if (std::abs(a->distance - b->distance) > params.symmetry_tolerance) continue;
    const double width = euclidean(a->cell, b->cell) - 1.0;
    if (width > params.max_width) continue;
    if (!best || width < best->width) best = GapProbe{a->cell, b->cell, deg, width};
  }
  return best;
}

std::vector<DoorwayCandidate> detect_doorways(const GridMap& belief, const DoorwayParams& params, int range,
                                              std::uint64_t seed) {
  validate(params);
  auto frontier = frontier_cells(belief);
  if (frontier.empty()) return {};
  Rng rng(seed);
  const auto sampled = rng.sample(std::move(frontier), static_cast<std::size_t>(params.samples));

  std::vector<DoorwayCandidate> found;
  for (Cell g : sampled) {
    const auto gap = probe_gap(belief, g, params);
    if (!gap) continue;
    Cell mid{(gap->wall_a.row + gap->wall_b.row) / 2, (gap->wall_a.col + gap->wall_b.col) / 2};
    if (!belief.is_free(mid)) {
      const auto snapped = nearest_free(belief, mid, params.max_width / 2.0);
      if (!snapped) continue;
      mid = *snapped;
    }
    if (std::any_of(found.begin(), found.end(), [&](const DoorwayCandidate& d) { return d.midpoint == mid; })) {
      continue;
    }
    const double gain = info_gain(belief, mid, range);
    if (gain < params.min_gain) continue;
    found.push_back({mid, std::fmod(gap->probe_deg + 90.0, 180.0), gap->width, gain});
  }

  std::sort(found.begin(), found.end(), [](const DoorwayCandidate& a, const DoorwayCandidate& b) {
    if (a.info_gain != b.info_gain) return a.info_gain > b.info_gain;
    return a.midpoint < b.midpoint;
  });
  std::vector<DoorwayCandidate> kept;
  const double sep2 = params.min_separation * params.min_separation;
  for (const auto& d : found) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](const DoorwayCandidate& k) {
      return static_cast<double>(squared_distance(k.midpoint, d.midpoint)) >= sep2;
    });
    if (clear) kept.push_back(d);
  }
  return kept;
}

}  // namespace mcox
