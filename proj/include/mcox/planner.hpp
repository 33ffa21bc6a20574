#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcox/doorway.hpp"
#include "mcox/endpoint.hpp"
#include "mcox/frontier.hpp"
#include "mcox/gridmap.hpp"
#include "mcox/llm_planner.hpp"
#include "mcox/task.hpp"

namespace mcox {

enum class PlannerKind { kSampleGreedy, kMeanShiftGreedy, kSampleDvc, kLlm, kLlmInformed };

PlannerKind parse_planner_kind(const std::string& name);
std::string to_string(PlannerKind k);
const std::vector<PlannerKind>& all_planner_kinds();

/// When a planner wants a new cycle (besides the replan horizon).
enum class ReplanPolicy {
  kAnyQueueEmpty,   // greedy baselines: one waypoint per robot per cycle
  kAllQueuesEmpty,  // DVC and LLM: wait for the whole team
};

/// Snapshot handed to a planner at the start of a cycle.
struct PlanningRequest {
  const GridMap* belief = nullptr;
  std::vector<RobotState> robots;  // ids 0..M-1, index == id
  std::vector<std::vector<Cell>> queues;
  std::vector<FrontierCandidate> frontiers;
  std::vector<DoorwayCandidate> doorways;
  TaskKind task = TaskKind::kExplore;
  std::optional<std::string> initial_info;
  std::string plan_summary;
  std::vector<std::string> exec_summary;
  bool horizon_expired = false;
  int cycle = 0;
  int timestep = 0;
  std::uint64_t seed = 0;
};

struct PlanResult {
  std::vector<std::vector<Cell>> queues;
  std::string summary;
  std::vector<std::string> notes;  // warnings and fallbacks, logged as events
  bool fallback = false;
};

class Planner {
 public:
  virtual ~Planner() = default;
  virtual PlanResult plan(const PlanningRequest& request) = 0;
  virtual ReplanPolicy policy() const = 0;
  virtual std::string name() const = 0;
};

/// Greedy one-waypoint-per-robot assignment. Only robots with empty queues
/// are assigned unless the horizon expired; candidates within `exclusion`
/// of another robot's current goal are skipped.
class GreedyPlanner : public Planner {
 public:
  enum class Source { kSampled, kMeanShift };
  GreedyPlanner(Source source, double exclusion, MeanShiftParams meanshift = {})
      : source_(source), exclusion_(exclusion), meanshift_(meanshift) {}

  PlanResult plan(const PlanningRequest& request) override;
  ReplanPolicy policy() const override { return ReplanPolicy::kAnyQueueEmpty; }
  std::string name() const override;

 private:
  Source source_;
  double exclusion_;
  MeanShiftParams meanshift_;
};

class DvcPlanner : public Planner {
 public:
  PlanResult plan(const PlanningRequest& request) override;
  ReplanPolicy policy() const override { return ReplanPolicy::kAllQueuesEmpty; }
  std::string name() const override { return "sample-dvc"; }
};

/// Produces the raw reply text for one query.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string complete(const PlannerContext& ctx, const Prompt& prompt, std::uint64_t seed) = 0;
};

/// Replies with the formatted output of mock_planner.
class MockBackend : public LlmBackend {
 public:
  std::string complete(const PlannerContext& ctx, const Prompt& prompt, std::uint64_t seed) override;
};

class EndpointBackend : public LlmBackend {
 public:
  EndpointBackend(EndpointConfig cfg, std::unique_ptr<HttpTransport> transport, Sleeper sleeper = sleep_seconds)
      : cfg_(std::move(cfg)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {}
  std::string complete(const PlannerContext& ctx, const Prompt& prompt, std::uint64_t seed) override;

 private:
  EndpointConfig cfg_;
  std::unique_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
};

struct LlmPlannerOptions {
  bool informed = false;  // pass the initial information into the prompt
  int image_scale = kDefaultImageScale;
  std::optional<std::filesystem::path> transcript_dir;
};

/// Prompt -> backend -> parse. A reply without robot lines is re-queried
/// once; a second failure falls back to greedy assignment over the cycle's
/// frontiers. Backend errors propagate.
class LlmPlanner : public Planner {
 public:
  LlmPlanner(std::unique_ptr<LlmBackend> backend, LlmPlannerOptions options)
      : backend_(std::move(backend)), options_(std::move(options)) {}

  PlanResult plan(const PlanningRequest& request) override;
  ReplanPolicy policy() const override { return ReplanPolicy::kAllQueuesEmpty; }
  std::string name() const override { return options_.informed ? "llm-informed" : "llm"; }

 private:
  std::unique_ptr<LlmBackend> backend_;
  LlmPlannerOptions options_;
  int queries_ = 0;
};

enum class LlmBackendKind { kMock, kEndpoint };

struct PlannerOptions {
  double greedy_exclusion = 5.0;
  MeanShiftParams meanshift;
  LlmBackendKind backend = LlmBackendKind::kMock;
  EndpointConfig endpoint;
  std::optional<std::filesystem::path> transcript_dir;
};

std::unique_ptr<Planner> make_planner(PlannerKind kind, const PlannerOptions& options = {});

}  // namespace mcox
