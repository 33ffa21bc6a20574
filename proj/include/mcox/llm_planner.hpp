#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcox/doorway.hpp"
#include "mcox/frontier.hpp"
#include "mcox/gridmap.hpp"
#include "mcox/task.hpp"

namespace mcox {

inline constexpr std::size_t kPlanSummaryLimit = 1000;
inline constexpr int kDefaultImageScale = 4;
inline constexpr std::size_t kMockQueueCap = 4;

/// Everything the centralized planner sees in one cycle.
struct PlannerContext {
  TaskKind task = TaskKind::kExplore;
  int map_rows = 0;
  int map_cols = 0;
  std::vector<RobotState> robots;
  std::vector<FrontierCandidate> frontiers;
  std::vector<DoorwayCandidate> doorways;
  std::string map_png;  // grayscale render of the belief
  int image_width = 0;
  int image_height = 0;
  int image_scale = kDefaultImageScale;
  std::optional<std::string> initial_info;
  std::string plan_summary;
  std::vector<std::string> exec_summary;
};

/// Renders the belief image and truncates the carried plan summary.
PlannerContext make_context(const GridMap& belief, TaskKind task, std::vector<RobotState> robots,
                            std::vector<FrontierCandidate> frontiers, std::vector<DoorwayCandidate> doorways,
                            std::optional<std::string> initial_info, std::string plan_summary,
                            std::vector<std::string> exec_summary, int image_scale = kDefaultImageScale);

struct Prompt {
  std::string text;
  std::string image_base64;  // PNG

  /// Text plus a one-line placeholder for the image, for transcripts.
  std::string transcript() const;
};

Prompt build_prompt(const PlannerContext& ctx);

/// Waypoint queues indexed by robot id, plus the summary carried forward.
struct PlanResponse {
  std::vector<std::vector<Cell>> waypoints;
  std::string summary;
  std::vector<std::string> warnings;  // not part of equality

  friend bool operator==(const PlanResponse& a, const PlanResponse& b) {
    return a.waypoints == b.waypoints && a.summary == b.summary;
  }
};

/// Canonical reply block: one "ROBOT <id>: (r,c) ..." line per robot, then
/// "SUMMARY: <text>". Newlines in the summary become spaces.
std::string format_response(const PlanResponse& plan);

/// Extracts the reply block from free text. Tolerates prose, markdown
/// emphasis, list markers and code fences around the block; the last line
/// seen for a robot wins. Waypoints outside the map or on Occupied belief
/// cells are dropped with a warning. Robots without a line get empty queues.
/// Throws Error(kParseFailure) when no robot line is found.
PlanResponse parse_response(const std::string& raw, const GridMap& belief, int robot_count);

/// Offline stand-in for the language model: Voronoi split of the union of
/// frontier and doorway cells, nearest-neighbour order per robot, queues
/// capped at kMockQueueCap. `seed` breaks exact distance ties.
PlanResponse mock_planner(const PlannerContext& ctx, std::uint64_t seed);

}  // namespace mcox
