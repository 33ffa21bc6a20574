#include "mcox/planner.hpp"

#include <cstdio>
#include <fstream>

#include "mcox/baseline.hpp"
#include "mcox/error.hpp"

namespace mcox {

namespace {

std::vector<Cell> positions(const std::vector<RobotState>& robots) {
  std::vector<Cell> out;
  for (const auto& r : robots) out.push_back(r.position);
  return out;
}

}  // namespace

PlannerKind parse_planner_kind(const std::string& name) {
  for (PlannerKind k : all_planner_kinds()) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::kConfig,
              "unknown planner '" + name + "' (sample-greedy|meanshift-greedy|sample-dvc|llm|llm-informed)");
}

std::string to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::kSampleGreedy: return "sample-greedy";
    case PlannerKind::kMeanShiftGreedy: return "meanshift-greedy";
    case PlannerKind::kSampleDvc: return "sample-dvc";
    case PlannerKind::kLlm: return "llm";
    case PlannerKind::kLlmInformed: return "llm-informed";
  }
  return "?";
}

const std::vector<PlannerKind>& all_planner_kinds() {
  static const std::vector<PlannerKind> kinds{PlannerKind::kSampleGreedy, PlannerKind::kMeanShiftGreedy,
                                              PlannerKind::kSampleDvc, PlannerKind::kLlm,
                                              PlannerKind::kLlmInformed};
  return kinds;
}

std::string GreedyPlanner::name() const {
  return source_ == Source::kSampled ? "sample-greedy" : "meanshift-greedy";
}

PlanResult GreedyPlanner::plan(const PlanningRequest& request) {
  const GridMap& belief = *request.belief;
  std::vector<Cell> candidates = source_ == Source::kSampled ? cells_of(request.frontiers)
                                                             : mean_shift_frontiers(belief, meanshift_);
  PlanResult result;
  result.queues = request.queues;
  result.queues.resize(request.robots.size());

  std::vector<RobotState> idle;
  std::vector<std::size_t> idle_index;
  std::vector<Cell> held_goals;
  for (std::size_t i = 0; i < request.robots.size(); ++i) {
    if (request.horizon_expired || result.queues[i].empty()) {
      result.queues[i].clear();
      idle.push_back(request.robots[i]);
      idle_index.push_back(i);
    } else {
      held_goals.push_back(result.queues[i].front());
    }
  }
  const double ex2 = exclusion_ * exclusion_;
  std::erase_if(candidates, [&](Cell c) {
    return std::any_of(held_goals.begin(), held_goals.end(),
                       [&](Cell g) { return static_cast<double>(squared_distance(c, g)) < ex2; });
  });
  const Assignment assigned = greedy_assign(candidates, idle, belief, positions(request.robots));
  for (std::size_t k = 0; k < idle.size(); ++k) result.queues[idle_index[k]] = assigned.queues[k];
  result.summary = std::to_string(idle.size()) + " robot(s) assigned from " + std::to_string(candidates.size()) +
                   " candidate(s)";
  return result;
}

PlanResult DvcPlanner::plan(const PlanningRequest& request) {
  PlanResult result;
  result.queues = dvc_assign(request.frontiers, request.robots, *request.belief).queues;
  std::size_t total = 0;
  for (const auto& q : result.queues) total += q.size();
  result.summary = std::to_string(total) + " waypoint(s) split over " + std::to_string(request.robots.size()) +
                   " Voronoi cell(s)";
  return result;
}

std::string MockBackend::complete(const PlannerContext& ctx, const Prompt& /*prompt*/, std::uint64_t seed) {
  return format_response(mock_planner(ctx, seed));
}

std::string EndpointBackend::complete(const PlannerContext& /*ctx*/, const Prompt& prompt, std::uint64_t /*seed*/) {
  return query_endpoint(cfg_, prompt, *transport_, sleeper_);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  os << text;
}

std::string numbered(const char* stem, int n, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d%s", stem, n, suffix);
  return buf;
}

}  // namespace

PlanResult LlmPlanner::plan(const PlanningRequest& request) {
  const GridMap& belief = *request.belief;
  const PlannerContext ctx =
      make_context(belief, request.task, request.robots, request.frontiers, request.doorways,
                   options_.informed ? request.initial_info : std::nullopt, request.plan_summary,
                   request.exec_summary, options_.image_scale);
  const Prompt prompt = build_prompt(ctx);
  if (options_.transcript_dir) {
    std::filesystem::create_directories(*options_.transcript_dir);
    write_text(*options_.transcript_dir / numbered("cycle", request.cycle, "_prompt.txt"), prompt.transcript());
  }

  PlanResult result;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::string raw = backend_->complete(ctx, prompt, request.seed + static_cast<std::uint64_t>(attempt));
    ++queries_;
    if (options_.transcript_dir) {
      write_text(*options_.transcript_dir / numbered("cycle", request.cycle,
                                                     attempt == 0 ? "_response.txt" : "_response_retry.txt"),
                 raw);
    }
    try {
      PlanResponse parsed = parse_response(raw, belief, static_cast<int>(request.robots.size()));
      result.queues = std::move(parsed.waypoints);
      result.summary = std::move(parsed.summary);
      result.notes = std::move(parsed.warnings);
      return result;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kParseFailure) throw;
      result.notes.push_back(std::string("unparseable reply (attempt ") + std::to_string(attempt + 1) + "): " +
                             e.what());
    }
  }
  result.fallback = true;
  result.queues = greedy_assign(request.frontiers, request.robots, belief, positions(request.robots)).queues;
  result.summary = request.plan_summary;
  result.notes.push_back("fell back to greedy assignment for this cycle");
  return result;
}

std::unique_ptr<Planner> make_planner(PlannerKind kind, const PlannerOptions& options) {
  switch (kind) {
    case PlannerKind::kSampleGreedy:
      return std::make_unique<GreedyPlanner>(GreedyPlanner::Source::kSampled, options.greedy_exclusion);
    case PlannerKind::kMeanShiftGreedy:
      return std::make_unique<GreedyPlanner>(GreedyPlanner::Source::kMeanShift, options.greedy_exclusion,
                                             options.meanshift);
    case PlannerKind::kSampleDvc:
      return std::make_unique<DvcPlanner>();
    case PlannerKind::kLlm:
    case PlannerKind::kLlmInformed: {
      std::unique_ptr<LlmBackend> backend;
      if (options.backend == LlmBackendKind::kMock) {
        backend = std::make_unique<MockBackend>();
      } else {
        backend = std::make_unique<EndpointBackend>(options.endpoint, std::make_unique<HttplibTransport>());
      }
      LlmPlannerOptions llm;
      llm.informed = kind == PlannerKind::kLlmInformed;
      llm.image_scale = options.endpoint.image_scale;
      llm.transcript_dir = options.transcript_dir;
      return std::make_unique<LlmPlanner>(std::move(backend), std::move(llm));
    }
  }
  throw Error(ErrorKind::kConfig, "unhandled planner kind");
}

}  // namespace mcox
