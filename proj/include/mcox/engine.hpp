#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcox/doorway.hpp"
#include "mcox/frontier.hpp"
#include "mcox/gridmap.hpp"
#include "mcox/planner.hpp"
#include "mcox/task.hpp"

namespace mcox {

inline constexpr int kRecordSchemaVersion = 1;
// a robot blocked by teammates this many steps in a row drops its head waypoint
inline constexpr int kBlockedPatience = 5;

struct RobotSpec {
  int detection_range = 5;
  int max_speed = 1;
};

struct EpisodeConfig {
  GridMap truth{1, 1};
  std::vector<Cell> deploy_zone;
  std::vector<RobotSpec> team;
  PlannerKind planner = PlannerKind::kSampleGreedy;
  Task task;
  int max_steps = 1000;
  int replan_horizon = 60;
  std::optional<std::string> initial_info;
  std::uint64_t seed = 0;
  FrontierParams frontier;
  DoorwayParams doorway;
  PlannerOptions planner_options;
  std::optional<std::filesystem::path> run_dir;  // transcripts and snapshots
  int snapshot_every = 0;                        // belief PGM every N steps; 0 = off
};

/// Picks M distinct deployment cells nearest the zone centroid; ties are
/// broken by a seeded key.
std::vector<Cell> place_team(const std::vector<Cell>& deploy_zone, std::size_t count, std::uint64_t seed);

enum class Outcome { kCompleted, kTimeout, kError };
std::string to_string(Outcome o);
Outcome parse_outcome(const std::string& s);

struct StepRecord {
  int t = 0;
  double coverage = 0.0;
  std::vector<Cell> positions;
  std::vector<int> queue_sizes;
};

struct PlanningCycle {
  int t = 0;
  int cycle = 0;
  std::string trigger;  // "initial" | "queues" | "horizon"
  std::vector<std::vector<Cell>> queues;
  std::string summary;
  bool fallback = false;
  int frontier_count = 0;
  int doorway_count = 0;
};

struct Event {
  int t = 0;
  std::string kind;
  int robot = -1;
  std::optional<Cell> cell;
  std::string detail;
};

struct RunRecord {
  int schema_version = kRecordSchemaVersion;
  std::string planner;
  std::string task;
  std::optional<Cell> target;
  std::uint64_t seed = 0;
  int max_steps = 0;
  int replan_horizon = 0;
  std::vector<RobotState> team;
  std::vector<StepRecord> steps;
  std::vector<PlanningCycle> cycles;
  std::vector<Event> events;
  Outcome outcome = Outcome::kTimeout;
  int outcome_step = 0;  // step at which the episode ended
  std::string error;
  int safety_violations = 0;
  double final_coverage = 0.0;
  std::string final_belief;  // ASCII map
  double planning_seconds = 0.0;  // wall clock, not serialized
};

nlohmann::json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);
/// Stable text form: identical inputs produce identical bytes.
std::string serialize(const RunRecord& record);

/// Runs one episode with a planner built from cfg.planner.
RunRecord run_episode(const EpisodeConfig& cfg);
/// Runs one episode with a caller-supplied planner.
RunRecord run_episode(const EpisodeConfig& cfg, Planner& planner);

}  // namespace mcox
