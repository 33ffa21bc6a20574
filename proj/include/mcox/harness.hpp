#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcox/engine.hpp"
#include "mcox/mapgen.hpp"
#include "mcox/planner.hpp"
#include "mcox/task.hpp"

namespace mcox {

enum class TeamComposition { kHomogeneous, kHeterogeneous };
TeamComposition parse_team_composition(const std::string& s);
std::string to_string(TeamComposition c);

/// Homogeneous: range 5, speed 1. Heterogeneous alternates fast (speed 3,
/// range 5) and slow (speed 1, range 10), starting with fast.
std::vector<RobotSpec> make_team(TeamComposition composition, int size);

/// Search-target band as fractions of the farthest reachable path distance
/// from the deploy anchor.
struct DifficultyBand {
  double min_fraction = 0.5;
  double max_fraction = 0.9;
};

struct ExperimentSpec {
  MapClass map_class = MapClass::kSmall;
  int map_count = 10;
  std::uint64_t first_map_seed = 1;
  std::vector<int> team_sizes{2};
  TeamComposition composition = TeamComposition::kHomogeneous;
  std::vector<PlannerKind> planners{PlannerKind::kSampleGreedy};
  TaskKind task = TaskKind::kExplore;
  DifficultyBand difficulty;
  std::uint64_t master_seed = 0;
  std::optional<int> max_steps;  // default: per map class
  int replan_horizon = 60;
  FrontierParams frontier;
  DoorwayParams doorway;
  PlannerOptions planner_options;
  std::filesystem::path output_dir = "mcox_out";
  int parallel = 1;
  bool keep_transcripts = false;
};

void validate(const ExperimentSpec& spec);
ExperimentSpec load_experiment(const std::filesystem::path& path);
ExperimentSpec experiment_from_json(const nlohmann::json& j);

/// One CSV row.
struct EpisodeResult {
  std::string map_class;
  std::uint64_t map_seed = 0;
  std::string planner;
  int team_size = 0;
  std::string task;
  Outcome outcome = Outcome::kTimeout;
  int steps = 0;  // completion step, or the limit on timeout
  double coverage_at_end = 0.0;
};

std::uint64_t episode_seed(std::uint64_t master, std::uint64_t map_seed, int team_size, const std::string& planner);

/// Target for search episodes: shared by every planner and team size on a map.
Cell search_target(const GeneratedMap& map, std::uint64_t master, std::uint64_t map_seed, DifficultyBand band);
/// Compass-style hint naming the part of the map holding `target`.
std::string location_hint(const GridMap& truth, Cell target);

std::string csv_header();
std::string csv_line(const EpisodeResult& r);
void write_csv(const std::filesystem::path& path, const std::vector<EpisodeResult>& rows);
std::vector<EpisodeResult> read_csv(const std::filesystem::path& path);

struct SummaryRow {
  std::string map_class;
  int team_size = 0;
  std::string planner;
  int episodes = 0;
  int completed = 0;
  int timeouts = 0;
  int errors = 0;
  // Completion-time quartiles; timeouts count as the step limit.
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double mean_steps = 0;
  double mean_coverage = 0;
};

using SummaryTable = std::vector<SummaryRow>;

/// Linear-interpolation quantile of sorted values, p in [0, 1].
double quantile(const std::vector<double>& sorted, double p);
SummaryTable summarize(const std::vector<EpisodeResult>& rows);
std::string format_summary(const SummaryTable& table);

/// Percent reduction in mean steps of `challenger` against `baseline` over
/// episodes both ran without error; timeouts count as the step limit.
double compare(const std::vector<EpisodeResult>& rows, const std::string& baseline, const std::string& challenger);

struct ExperimentOutput {
  std::vector<EpisodeResult> results;  // sorted by (map seed, team size, planner order)
  SummaryTable summary;
  int executed = 0;  // episodes run in this call (others were loaded from disk)
};

using ProgressFn = std::function<void(const EpisodeResult&)>;
ExperimentOutput run_experiment(const ExperimentSpec& spec, const ProgressFn& progress = {});

}  // namespace mcox
