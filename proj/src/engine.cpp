#include "mcox/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "mcox/error.hpp"
#include "mcox/map_io.hpp"
#include "mcox/mapgen.hpp"
#include "mcox/nav.hpp"
#include "mcox/rng.hpp"

namespace mcox {

std::vector<Cell> place_team(const std::vector<Cell>& deploy_zone, std::size_t count, std::uint64_t seed) {
  std::vector<Cell> zone = deploy_zone;
  std::sort(zone.begin(), zone.end());
  zone.erase(std::unique(zone.begin(), zone.end()), zone.end());
  if (count == 0) throw Error(ErrorKind::kConfig, "team size must be positive");
  if (count > zone.size()) {
    throw Error(ErrorKind::kConfig, "team of " + std::to_string(count) + " does not fit a deployment zone of " +
                                        std::to_string(zone.size()) + " cells");
  }
  double sr = 0, sc = 0;
  for (Cell c : zone) {
    sr += c.row;
    sc += c.col;
  }
  sr /= static_cast<double>(zone.size());
  sc /= static_cast<double>(zone.size());
  struct Keyed {
    double d2;
    std::uint64_t tie;
    Cell c;
  };
  std::vector<Keyed> keyed;
  for (Cell c : zone) {
    const double dr = c.row - sr, dc = c.col - sc;
    const std::uint64_t key =
        mix_seed(seed, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.row)) << 32) |
                           static_cast<std::uint32_t>(c.col));
    keyed.push_back({dr * dr + dc * dc, key, c});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    if (a.tie != b.tie) return a.tie < b.tie;
    return a.c < b.c;
  });
  std::vector<Cell> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(keyed[i].c);
  return out;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kCompleted: return "completed";
    case Outcome::kTimeout: return "timeout";
    case Outcome::kError: return "error";
  }
  return "?";
}

Outcome parse_outcome(const std::string& s) {
  if (s == "completed") return Outcome::kCompleted;
  if (s == "timeout") return Outcome::kTimeout;
  if (s == "error") return Outcome::kError;
  throw Error(ErrorKind::kConfig, "unknown outcome '" + s + "'");
}

namespace {

nlohmann::json cell_json(Cell c) { return nlohmann::json::array({c.row, c.col}); }
Cell json_cell(const nlohmann::json& j) { return Cell{j.at(0).get<int>(), j.at(1).get<int>()}; }

nlohmann::json cells_json(const std::vector<Cell>& cells) {
  auto a = nlohmann::json::array();
  for (Cell c : cells) a.push_back(cell_json(c));
  return a;
}
std::vector<Cell> json_cells(const nlohmann::json& j) {
  std::vector<Cell> out;
  for (const auto& e : j) out.push_back(json_cell(e));
  return out;
}

void validate(const EpisodeConfig& cfg) {
  if (cfg.team.empty()) throw Error(ErrorKind::kConfig, "team is empty");
  for (const RobotSpec& r : cfg.team) {
    if (r.detection_range < 1) throw Error(ErrorKind::kConfig, "detection range must be >= 1");
    if (r.max_speed < 1) throw Error(ErrorKind::kConfig, "max speed must be >= 1");
  }
  if (cfg.max_steps < 1) throw Error(ErrorKind::kConfig, "max_steps must be >= 1");
  if (cfg.replan_horizon < 1) throw Error(ErrorKind::kConfig, "replan horizon must be >= 1");
  if (cfg.snapshot_every < 0) throw Error(ErrorKind::kConfig, "snapshot interval must be >= 0");
  if (cfg.deploy_zone.empty()) throw Error(ErrorKind::kConfig, "deployment zone is empty");
  for (Cell c : cfg.deploy_zone) {
    if (!cfg.truth.in_bounds(c) || cfg.truth.at(c) != CellState::kFree) {
      throw Error(ErrorKind::kConfig, "deployment cell " + to_string(c) + " is not free");
    }
  }
  if (cfg.task.kind == TaskKind::kSearch) {
    if (!cfg.task.target) throw Error(ErrorKind::kConfig, "search task without target");
    const Cell t = *cfg.task.target;
    if (!cfg.truth.in_bounds(t) || cfg.truth.at(t) != CellState::kFree) {
      throw Error(ErrorKind::kConfig, "search target " + to_string(t) + " is not a free cell");
    }
  }
  validate(cfg.frontier);
  validate(cfg.doorway);
}

bool all_empty(const std::vector<std::vector<Cell>>& q) {
  return std::all_of(q.begin(), q.end(), [](const auto& v) { return v.empty(); });
}
bool any_empty(const std::vector<std::vector<Cell>>& q) {
  return std::any_of(q.begin(), q.end(), [](const auto& v) { return v.empty(); });
}

}  // namespace

nlohmann::json to_json(const RunRecord& r) {
  using nlohmann::json;
  json j;
  j["schema_version"] = r.schema_version;
  j["planner"] = r.planner;
  j["task"] = r.task;
  j["target"] = r.target ? cell_json(*r.target) : json(nullptr);
  j["seed"] = r.seed;
  j["max_steps"] = r.max_steps;
  j["replan_horizon"] = r.replan_horizon;
  json team = json::array();
  for (const RobotState& s : r.team) {
    team.push_back({{"id", s.id},
                    {"position", cell_json(s.position)},
                    {"detection_range", s.detection_range},
                    {"max_speed", s.max_speed}});
  }
  j["team"] = team;
  json steps = json::array();
  for (const StepRecord& s : r.steps) {
    steps.push_back({{"t", s.t}, {"coverage", s.coverage}, {"positions", cells_json(s.positions)},
                     {"queue_sizes", s.queue_sizes}});
  }
  j["steps"] = steps;
  json cycles = json::array();
  for (const PlanningCycle& c : r.cycles) {
    json queues = json::array();
    for (const auto& q : c.queues) queues.push_back(cells_json(q));
    cycles.push_back({{"t", c.t},
                      {"cycle", c.cycle},
                      {"trigger", c.trigger},
                      {"queues", queues},
                      {"summary", c.summary},
                      {"fallback", c.fallback},
                      {"frontier_count", c.frontier_count},
                      {"doorway_count", c.doorway_count}});
  }
  j["cycles"] = cycles;
  json events = json::array();
  for (const Event& e : r.events) {
    events.push_back({{"t", e.t},
                      {"kind", e.kind},
                      {"robot", e.robot},
                      {"cell", e.cell ? cell_json(*e.cell) : json(nullptr)},
                      {"detail", e.detail}});
  }
  j["events"] = events;
  j["outcome"] = to_string(r.outcome);
  j["outcome_step"] = r.outcome_step;
  j["error"] = r.error;
  j["safety_violations"] = r.safety_violations;
  j["final_coverage"] = r.final_coverage;
  j["final_belief"] = r.final_belief;
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kRecordSchemaVersion) {
      throw Error(ErrorKind::kConfig, "unsupported record schema version " + std::to_string(r.schema_version));
    }
    r.planner = j.at("planner").get<std::string>();
    r.task = j.at("task").get<std::string>();
    if (!j.at("target").is_null()) r.target = json_cell(j.at("target"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.max_steps = j.at("max_steps").get<int>();
    r.replan_horizon = j.at("replan_horizon").get<int>();
    for (const auto& s : j.at("team")) {
      RobotState rs;
      rs.id = s.at("id").get<int>();
      rs.position = json_cell(s.at("position"));
      rs.detection_range = s.at("detection_range").get<int>();
      rs.max_speed = s.at("max_speed").get<int>();
      r.team.push_back(rs);
    }
    for (const auto& s : j.at("steps")) {
      StepRecord sr;
      sr.t = s.at("t").get<int>();
      sr.coverage = s.at("coverage").get<double>();
      sr.positions = json_cells(s.at("positions"));
      sr.queue_sizes = s.at("queue_sizes").get<std::vector<int>>();
      r.steps.push_back(std::move(sr));
    }
    for (const auto& c : j.at("cycles")) {
      PlanningCycle pc;
      pc.t = c.at("t").get<int>();
      pc.cycle = c.at("cycle").get<int>();
      pc.trigger = c.at("trigger").get<std::string>();
      for (const auto& q : c.at("queues")) pc.queues.push_back(json_cells(q));
      pc.summary = c.at("summary").get<std::string>();
      pc.fallback = c.at("fallback").get<bool>();
      pc.frontier_count = c.at("frontier_count").get<int>();
      pc.doorway_count = c.at("doorway_count").get<int>();
      r.cycles.push_back(std::move(pc));
    }
    for (const auto& e : j.at("events")) {
      Event ev;
      ev.t = e.at("t").get<int>();
      ev.kind = e.at("kind").get<std::string>();
      ev.robot = e.at("robot").get<int>();
      if (!e.at("cell").is_null()) ev.cell = json_cell(e.at("cell"));
      ev.detail = e.at("detail").get<std::string>();
      r.events.push_back(std::move(ev));
    }
    r.outcome = parse_outcome(j.at("outcome").get<std::string>());
    r.outcome_step = j.at("outcome_step").get<int>();
    r.error = j.at("error").get<std::string>();
    r.safety_violations = j.at("safety_violations").get<int>();
    r.final_coverage = j.at("final_coverage").get<double>();
    r.final_belief = j.at("final_belief").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("malformed run record: ") + e.what());
  }
  return r;
}

std::string serialize(const RunRecord& record) { return to_json(record).dump(1) + "\n"; }

RunRecord run_episode(const EpisodeConfig& cfg) {
  PlannerOptions options = cfg.planner_options;
  if (cfg.run_dir && !options.transcript_dir) options.transcript_dir = *cfg.run_dir / "transcripts";
  auto planner = make_planner(cfg.planner, options);
  return run_episode(cfg, *planner);
}

RunRecord run_episode(const EpisodeConfig& cfg, Planner& planner) {
  validate(cfg);
  const GridMap& truth = cfg.truth;

  RunRecord rec;
  rec.planner = planner.name();
  rec.task = to_string(cfg.task.kind);
  rec.target = cfg.task.target;
  rec.seed = cfg.seed;
  rec.max_steps = cfg.max_steps;
  rec.replan_horizon = cfg.replan_horizon;

  const auto starts = place_team(cfg.deploy_zone, cfg.team.size(), cfg.seed);
  std::vector<RobotState> robots;
  for (std::size_t i = 0; i < cfg.team.size(); ++i) {
    RobotState r;
    r.id = static_cast<int>(i);
    r.position = starts[i];
    r.detection_range = cfg.team[i].detection_range;
    r.max_speed = cfg.team[i].max_speed;
    robots.push_back(r);
  }
  rec.team = robots;

  const CellMask reachable = reachable_free(truth, deploy_anchor(cfg.deploy_zone));
  GridMap belief = new_belief(truth.rows(), truth.cols(), truth.resolution());
  for (const RobotState& r : robots) merge_into(belief, lidar_scan(truth, r.position, r.detection_range));

  if (cfg.run_dir) std::filesystem::create_directories(*cfg.run_dir);
  auto snapshot = [&](int t) {
    if (!cfg.run_dir || cfg.snapshot_every <= 0 || t % cfg.snapshot_every != 0) return;
    char name[48];
    std::snprintf(name, sizeof name, "belief_%06d.pgm", t);
    save_pgm(*cfg.run_dir / name, belief);
  };

  std::vector<std::vector<Cell>> queues(robots.size());
  auto record_step = [&](int t) {
    StepRecord s;
    s.t = t;
    s.coverage = coverage_fraction(belief, truth, reachable);
    for (const RobotState& r : robots) s.positions.push_back(r.position);
    for (const auto& q : queues) s.queue_sizes.push_back(static_cast<int>(q.size()));
    rec.steps.push_back(std::move(s));
  };
  auto done = [&]() {
    if (cfg.task.kind == TaskKind::kSearch) return check_search_done(belief, *cfg.task.target);
    return exploration_complete(belief, truth, reachable);
  };
  auto check_safety = [&](int t) {
    for (std::size_t a = 0; a < robots.size(); ++a) {
      for (std::size_t b = a + 1; b < robots.size(); ++b) {
        if (euclidean(robots[a].position, robots[b].position) < kSafeDistance) {
          ++rec.safety_violations;
          rec.events.push_back({t, "safety", static_cast<int>(a), robots[a].position,
                                "robots " + std::to_string(a) + " and " + std::to_string(b) + " too close"});
        }
      }
    }
  };

  record_step(0);
  snapshot(0);
  check_safety(0);

  std::string plan_summary;
  std::vector<std::string> exec_summary;
  int t = 0;
  int since_plan = 0;
  int cycle = 0;
  bool finished = done();
  // consecutive blocked steps toward the same head waypoint
  std::vector<std::pair<Cell, int>> stalled(robots.size(), {Cell{-1, -1}, 0});

  while (!finished && t < cfg.max_steps) {
    std::string trigger;
    if (cycle == 0) {
      trigger = "initial";
    } else if (since_plan >= cfg.replan_horizon) {
      trigger = "horizon";
    } else if (planner.policy() == ReplanPolicy::kAllQueuesEmpty ? all_empty(queues) : any_empty(queues)) {
      trigger = "queues";
    }
    if (!trigger.empty()) {
      PlanningRequest req;
      req.belief = &belief;
      req.robots = robots;
      req.queues = queues;
      req.frontiers = rank_and_select(belief, robots, cfg.frontier, mix_seed(cfg.seed, 2 * cycle + 1));
      req.doorways = detect_doorways(belief, cfg.doorway, robots.front().detection_range,
                                     mix_seed(cfg.seed, 2 * cycle + 2));
      req.task = cfg.task.kind;
      req.initial_info = cfg.initial_info;
      req.plan_summary = plan_summary;
      req.exec_summary = exec_summary;
      req.horizon_expired = trigger == "horizon";
      req.cycle = cycle;
      req.timestep = t;
      req.seed = mix_seed(cfg.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(cycle));

      PlanResult result;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        result = planner.plan(req);
      } catch (const Error& e) {
        rec.planning_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.outcome = Outcome::kError;
        rec.outcome_step = t;
        rec.error = std::string(to_string(e.kind())) + ": " + e.what();
        rec.events.push_back({t, "error", -1, std::nullopt, rec.error});
        rec.final_coverage = rec.steps.back().coverage;
        rec.final_belief = to_ascii(belief);
        return rec;
      }
      rec.planning_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      result.queues.resize(robots.size());
      queues = result.queues;
      plan_summary = result.summary;
      exec_summary.clear();
      for (const std::string& n : result.notes) rec.events.push_back({t, "planner-note", -1, std::nullopt, n});
      if (result.fallback) rec.events.push_back({t, "fallback", -1, std::nullopt, "greedy fallback"});
      rec.cycles.push_back({t, cycle, trigger, queues, result.summary, result.fallback,
                            static_cast<int>(req.frontiers.size()), static_cast<int>(req.doorways.size())});
      since_plan = 0;
      ++cycle;
    }

    std::vector<Observation> observed;
    for (std::size_t i = 0; i < robots.size(); ++i) {
      RobotState& r = robots[i];
      auto& q = queues[i];
      if (q.empty()) continue;
      const Cell w = q.front();
      if (!is_reachable(belief, r.position, w)) {
        exec_summary.push_back(to_string(w) + " unreachable by robot " + std::to_string(r.id));
        rec.events.push_back({t, "unreachable", r.id, w, ""});
        q.erase(q.begin());
        continue;
      }
      DynamicObstacleSet others;
      for (std::size_t j = 0; j < robots.size(); ++j) {
        if (j != i) others.push_back({robots[j].position, kSafeDistance});
      }
      const auto path = try_plan_path(belief, r.position, w, others);
      if (!path) {
        auto& [stall_cell, stall_steps] = stalled[i];
        if (stall_cell != w) stall_steps = 0;
        stall_cell = w;
        if (++stall_steps >= kBlockedPatience) {
          // a parked teammate in a one-cell passage would otherwise hold this robot forever
          exec_summary.push_back(to_string(w) + " blocked for robot " + std::to_string(r.id));
          rec.events.push_back({t, "blocked", r.id, w, "dropped after " + std::to_string(stall_steps) + " waits"});
          q.erase(q.begin());
          stall_steps = 0;
        } else {
          rec.events.push_back({t, "wait", r.id, w, "blocked by teammates"});
        }
      } else {
        stalled[i].second = 0;
        r.position = advance(r.position, *path, r.max_speed).position;
        if (r.position == w) {
          q.erase(q.begin());
          rec.events.push_back({t + 1, "reached", r.id, w, ""});
        }
      }
      const auto obs = lidar_scan(truth, r.position, r.detection_range);
      observed.insert(observed.end(), obs.begin(), obs.end());
    }
    merge_into(belief, observed);
    ++t;
    ++since_plan;
    check_safety(t);
    record_step(t);
    snapshot(t);
    finished = done();
  }

  rec.outcome = finished ? Outcome::kCompleted : Outcome::kTimeout;
  rec.outcome_step = t;
  if (finished && cfg.task.kind == TaskKind::kSearch) {
    rec.events.push_back({t, "target-observed", -1, *cfg.task.target, ""});
  }
  rec.final_coverage = rec.steps.back().coverage;
  rec.final_belief = to_ascii(belief);
  return rec;
}

}  // namespace mcox
