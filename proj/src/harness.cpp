#include "mcox/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "mcox/error.hpp"
#include "mcox/rng.hpp"

namespace mcox {

TeamComposition parse_team_composition(const std::string& s) {
  if (s == "homogeneous") return TeamComposition::kHomogeneous;
  if (s == "heterogeneous") return TeamComposition::kHeterogeneous;
  throw Error(ErrorKind::kConfig, "unknown team composition '" + s + "' (homogeneous|heterogeneous)");
}

std::string to_string(TeamComposition c) {
  return c == TeamComposition::kHomogeneous ? "homogeneous" : "heterogeneous";
}

std::vector<RobotSpec> make_team(TeamComposition composition, int size) {
  if (size < 1) throw Error(ErrorKind::kConfig, "team size must be >= 1");
  std::vector<RobotSpec> team;
  for (int i = 0; i < size; ++i) {
    if (composition == TeamComposition::kHomogeneous || i % 2 == 0) {
      team.push_back({5, composition == TeamComposition::kHomogeneous ? 1 : 3});
    } else {
      team.push_back({10, 1});
    }
  }
  return team;
}

void validate(const ExperimentSpec& spec) {
  if (spec.map_count < 1) throw Error(ErrorKind::kConfig, "map_count must be >= 1");
  if (spec.team_sizes.empty()) throw Error(ErrorKind::kConfig, "team_sizes is empty");
  for (int m : spec.team_sizes) {
    if (m < 1) throw Error(ErrorKind::kConfig, "team sizes must be >= 1");
  }
  if (spec.planners.empty()) throw Error(ErrorKind::kConfig, "planners is empty");
  std::set<PlannerKind> seen(spec.planners.begin(), spec.planners.end());
  if (seen.size() != spec.planners.size()) throw Error(ErrorKind::kConfig, "duplicate planner in list");
  if (spec.max_steps && *spec.max_steps < 1) throw Error(ErrorKind::kConfig, "max_steps must be >= 1");
  if (spec.replan_horizon < 1) throw Error(ErrorKind::kConfig, "replan_horizon must be >= 1");
  if (spec.parallel < 1) throw Error(ErrorKind::kConfig, "parallel must be >= 1");
  const DifficultyBand& b = spec.difficulty;
  if (!(b.min_fraction >= 0.0 && b.min_fraction <= b.max_fraction && b.max_fraction <= 1.0)) {
    throw Error(ErrorKind::kConfig, "difficulty band must satisfy 0 <= min <= max <= 1");
  }
  validate(spec.frontier);
  validate(spec.doorway);
}

namespace {

template <typename T>
void take(const nlohmann::json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) out = it->get<T>();
}

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::kConfig, where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw Error(ErrorKind::kConfig, "unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  try {
    reject_unknown(j,
                   {"map_class", "map_count", "first_map_seed", "team_sizes", "composition", "planners", "task",
                    "difficulty", "seed", "max_steps", "replan_horizon", "frontier", "doorway", "llm",
                    "output_dir", "parallel", "keep_transcripts"},
                   "config");
    if (j.contains("map_class")) s.map_class = parse_map_class(j["map_class"].get<std::string>());
    take(j, "map_count", s.map_count);
    take(j, "first_map_seed", s.first_map_seed);
    take(j, "team_sizes", s.team_sizes);
    if (j.contains("composition")) s.composition = parse_team_composition(j["composition"].get<std::string>());
    if (j.contains("planners")) {
      s.planners.clear();
      for (const auto& p : j["planners"]) s.planners.push_back(parse_planner_kind(p.get<std::string>()));
    }
    if (j.contains("task")) s.task = parse_task_kind(j["task"].get<std::string>());
    if (j.contains("difficulty")) {
      const auto& d = j["difficulty"];
      reject_unknown(d, {"min", "max"}, "difficulty");
      take(d, "min", s.difficulty.min_fraction);
      take(d, "max", s.difficulty.max_fraction);
    }
    take(j, "seed", s.master_seed);
    if (j.contains("max_steps") && !j["max_steps"].is_null()) s.max_steps = j["max_steps"].get<int>();
    take(j, "replan_horizon", s.replan_horizon);
    if (j.contains("frontier")) {
      const auto& f = j["frontier"];
      reject_unknown(f, {"samples", "keep", "cost_weight", "min_separation"}, "frontier");
      take(f, "samples", s.frontier.samples);
      take(f, "keep", s.frontier.keep);
      take(f, "cost_weight", s.frontier.cost_weight);
      take(f, "min_separation", s.frontier.min_separation);
    }
    if (j.contains("doorway")) {
      const auto& d = j["doorway"];
      reject_unknown(d,
                     {"samples", "directions", "max_width", "ray_length", "min_gain", "min_separation",
                      "symmetry_tolerance"},
                     "doorway");
      take(d, "samples", s.doorway.samples);
      take(d, "directions", s.doorway.directions);
      take(d, "max_width", s.doorway.max_width);
      take(d, "ray_length", s.doorway.ray_length);
      take(d, "min_gain", s.doorway.min_gain);
      take(d, "min_separation", s.doorway.min_separation);
      take(d, "symmetry_tolerance", s.doorway.symmetry_tolerance);
    }
    if (j.contains("llm")) {
      const auto& l = j["llm"];
      reject_unknown(l,
                     {"backend", "base_url", "model", "api_key_env", "timeout_s", "max_retries", "backoff_s",
                      "image_scale"},
                     "llm");
      if (l.contains("backend")) {
        const std::string b = l["backend"].get<std::string>();
        if (b == "mock") {
          s.planner_options.backend = LlmBackendKind::kMock;
        } else if (b == "endpoint") {
          s.planner_options.backend = LlmBackendKind::kEndpoint;
        } else {
          throw Error(ErrorKind::kConfig, "llm.backend must be mock or endpoint");
        }
      }
      EndpointConfig& e = s.planner_options.endpoint;
      take(l, "base_url", e.base_url);
      take(l, "model", e.model);
      take(l, "api_key_env", e.api_key_env);
      take(l, "timeout_s", e.timeout_s);
      take(l, "max_retries", e.max_retries);
      take(l, "backoff_s", e.backoff_initial_s);
      take(l, "image_scale", e.image_scale);
    }
    std::string out;
    take(j, "output_dir", out);
    if (!out.empty()) s.output_dir = out;
    take(j, "parallel", s.parallel);
    take(j, "keep_transcripts", s.keep_transcripts);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("bad config value: ") + e.what());
  }
  validate(s);
  return s;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
  return experiment_from_json(j);
}

std::uint64_t episode_seed(std::uint64_t master, std::uint64_t map_seed, int team_size, const std::string& planner) {
  std::uint64_t s = mix_seed(master, map_seed);
  s = mix_seed(s, static_cast<std::uint64_t>(team_size));
  return mix_seed(s, hash_string(planner));
}

Cell search_target(const GeneratedMap& map, std::uint64_t master, std::uint64_t map_seed, DifficultyBand band) {
  const auto dist = bfs_distances(map.map, deploy_anchor(map.deploy_zone));
  const int far = *std::max_element(dist.begin(), dist.end());
  DistanceBand cells{static_cast<int>(std::ceil(band.min_fraction * far)),
                     static_cast<int>(std::floor(band.max_fraction * far))};
  return sample_target(map.map, map.deploy_zone, mix_seed(master ^ 0x5eedULL, map_seed), cells);
}

std::string location_hint(const GridMap& truth, Cell target) {
  static const char* kNames[3][3] = {{"northwestern", "northern", "northeastern"},
                                     {"western", "central", "eastern"},
                                     {"southwestern", "southern", "southeastern"}};
  const int band_r = std::min(2, target.row * 3 / truth.rows());
  const int band_c = std::min(2, target.col * 3 / truth.cols());
  return std::string("The object of interest is most likely in the ") + kNames[band_r][band_c] +
         " part of the map.";
}

std::string csv_header() { return "map_class,map_seed,planner,team_size,task,outcome,steps,coverage_at_end"; }

std::string csv_line(const EpisodeResult& r) {
  char cov[32];
  std::snprintf(cov, sizeof cov, "%.6f", r.coverage_at_end);
  return r.map_class + "," + std::to_string(r.map_seed) + "," + r.planner + "," + std::to_string(r.team_size) + "," +
         r.task + "," + to_string(r.outcome) + "," + std::to_string(r.steps) + "," + cov;
}

void write_csv(const std::filesystem::path& path, const std::vector<EpisodeResult>& rows) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  os << csv_header() << "\n";
  for (const auto& r : rows) os << csv_line(r) << "\n";
}

std::vector<EpisodeResult> read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != csv_header()) {
    throw Error(ErrorKind::kIo, path.string() + ": missing or unexpected CSV header");
  }
  std::vector<EpisodeResult> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 8) throw Error(ErrorKind::kIo, path.string() + ":" + std::to_string(lineno) + ": expected 8 fields");
    try {
      EpisodeResult r;
      r.map_class = f[0];
      r.map_seed = std::stoull(f[1]);
      r.planner = f[2];
      r.team_size = std::stoi(f[3]);
      r.task = f[4];
      r.outcome = parse_outcome(f[5]);
      r.steps = std::stoi(f[6]);
      r.coverage_at_end = std::stod(f[7]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kIo, path.string() + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  return rows;
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorKind::kInvalidArgument, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SummaryTable summarize(const std::vector<EpisodeResult>& rows) {
  // first-appearance order of planners keeps the table in spec order
  std::vector<std::string> planner_order;
  for (const auto& r : rows) {
    if (std::find(planner_order.begin(), planner_order.end(), r.planner) == planner_order.end()) {
      planner_order.push_back(r.planner);
    }
  }
  auto rank = [&](const std::string& p) {
    return std::find(planner_order.begin(), planner_order.end(), p) - planner_order.begin();
  };
  using Key = std::tuple<std::string, int, long>;
  std::map<Key, std::vector<const EpisodeResult*>> groups;
  for (const auto& r : rows) groups[{r.map_class, r.team_size, rank(r.planner)}].push_back(&r);

  SummaryTable table;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    row.map_class = std::get<0>(key);
    row.team_size = std::get<1>(key);
    row.planner = planner_order[static_cast<std::size_t>(std::get<2>(key))];
    std::vector<double> steps;
    double coverage = 0;
    for (const EpisodeResult* r : members) {
      ++row.episodes;
      if (r->outcome == Outcome::kError) {
        ++row.errors;
        continue;
      }
      r->outcome == Outcome::kCompleted ? ++row.completed : ++row.timeouts;
      steps.push_back(r->steps);
      coverage += r->coverage_at_end;
    }
    if (!steps.empty()) {
      std::sort(steps.begin(), steps.end());
      row.min = steps.front();
      row.q1 = quantile(steps, 0.25);
      row.median = quantile(steps, 0.5);
      row.q3 = quantile(steps, 0.75);
      row.max = steps.back();
      double sum = 0;
      for (double v : steps) sum += v;
      row.mean_steps = sum / static_cast<double>(steps.size());
      row.mean_coverage = coverage / static_cast<double>(steps.size());
    }
    table.push_back(row);
  }
  return table;
}

std::string format_summary(const SummaryTable& table) {
  std::string out =
      "map_class,team_size,planner,episodes,completed,timeouts,errors,min,q1,median,q3,max,mean_steps,mean_coverage\n";
  char buf[256];
  for (const auto& r : table) {
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%d,%d,%d,%d,%.1f,%.2f,%.2f,%.2f,%.1f,%.2f,%.4f\n", r.map_class.c_str(),
                  r.team_size, r.planner.c_str(), r.episodes, r.completed, r.timeouts, r.errors, r.min, r.q1,
                  r.median, r.q3, r.max, r.mean_steps, r.mean_coverage);
    out += buf;
  }
  return out;
}

double compare(const std::vector<EpisodeResult>& rows, const std::string& baseline, const std::string& challenger) {
  using Key = std::tuple<std::string, std::uint64_t, int, std::string>;
  std::map<Key, int> base, chal;
  bool seen_base = false, seen_chal = false;
  for (const auto& r : rows) {
    seen_base |= r.planner == baseline;
    seen_chal |= r.planner == challenger;
    if (r.outcome == Outcome::kError) continue;
    const Key k{r.map_class, r.map_seed, r.team_size, r.task};
    if (r.planner == baseline) base[k] = r.steps;
    if (r.planner == challenger) chal[k] = r.steps;
  }
  if (!seen_base || !seen_chal) {
    throw Error(ErrorKind::kUndefinedComparison,
                "planner '" + (seen_base ? challenger : baseline) + "' has no episodes");
  }
  double sb = 0, sc = 0;
  int n = 0;
  for (const auto& [k, steps] : base) {
    auto it = chal.find(k);
    if (it == chal.end()) continue;
    sb += steps;
    sc += it->second;
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::kUndefinedComparison, "no episodes shared by " + baseline + " and " + challenger);
  if (sb == 0) throw Error(ErrorKind::kUndefinedComparison, "baseline mean is zero");
  return (sb - sc) / sb * 100.0;
}

namespace {

struct Job {
  std::size_t map_index;
  int team_size;
  PlannerKind planner;
};

std::string record_name(const std::string& cls, std::uint64_t seed, const std::string& planner, int team) {
  return cls + "_s" + std::to_string(seed) + "_" + planner + "_m" + std::to_string(team) + ".json";
}

EpisodeResult result_of(const RunRecord& rec, const std::string& cls, std::uint64_t map_seed, int team) {
  EpisodeResult r;
  r.map_class = cls;
  r.map_seed = map_seed;
  r.planner = rec.planner;
  r.team_size = team;
  r.task = rec.task;
  r.outcome = rec.outcome;
  r.steps = rec.outcome_step;
  r.coverage_at_end = rec.final_coverage;
  return r;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec, const ProgressFn& progress) {
  validate(spec);
  const std::string cls = to_string(spec.map_class);
  const auto records_dir = spec.output_dir / "records";
  std::filesystem::create_directories(records_dir);

  std::vector<std::uint64_t> map_seeds;
  std::vector<GeneratedMap> maps;
  std::vector<std::optional<Cell>> targets;
  for (int i = 0; i < spec.map_count; ++i) {
    const std::uint64_t ms = spec.first_map_seed + static_cast<std::uint64_t>(i);
    map_seeds.push_back(ms);
    maps.push_back(generate(spec.map_class, ms));
    if (spec.task == TaskKind::kSearch) {
      targets.push_back(search_target(maps.back(), spec.master_seed, ms, spec.difficulty));
    } else {
      targets.push_back(std::nullopt);
    }
  }

  std::vector<Job> jobs;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    for (int team : spec.team_sizes) {
      for (PlannerKind p : spec.planners) jobs.push_back({m, team, p});
    }
  }

  ExperimentOutput out;
  out.results.resize(jobs.size());
  std::vector<bool> pending(jobs.size(), true);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    const auto path =
        records_dir / record_name(cls, map_seeds[job.map_index], to_string(job.planner), job.team_size);
    if (!std::filesystem::exists(path)) continue;
    std::ifstream is(path);
    try {
      out.results[i] = result_of(record_from_json(nlohmann::json::parse(is)), cls, map_seeds[job.map_index],
                                 job.team_size);
      pending[i] = false;
    } catch (const std::exception&) {
      // unreadable leftovers are rerun
    }
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      if (!pending[i]) continue;
      const Job& job = jobs[i];
      const std::uint64_t ms = map_seeds[job.map_index];
      const std::string pname = to_string(job.planner);
      const GeneratedMap& gm = maps[job.map_index];

      EpisodeConfig cfg;
      cfg.truth = gm.map;
      cfg.deploy_zone = gm.deploy_zone;
      cfg.team = make_team(spec.composition, job.team_size);
      cfg.planner = job.planner;
      cfg.task = targets[job.map_index] ? Task::search(*targets[job.map_index]) : Task::explore();
      cfg.max_steps = spec.max_steps.value_or(timestep_limit(spec.map_class));
      cfg.replan_horizon = spec.replan_horizon;
      if (targets[job.map_index]) cfg.initial_info = location_hint(gm.map, *targets[job.map_index]);
      cfg.seed = episode_seed(spec.master_seed, ms, job.team_size, pname);
      cfg.frontier = spec.frontier;
      cfg.doorway = spec.doorway;
      cfg.planner_options = spec.planner_options;
      const std::string stem = record_name(cls, ms, pname, job.team_size);
      if (spec.keep_transcripts) {
        cfg.planner_options.transcript_dir = spec.output_dir / "transcripts" / stem.substr(0, stem.size() - 5);
      }

      RunRecord rec;
      try {
        rec = run_episode(cfg);
      } catch (const Error& e) {
        rec.planner = pname;
        rec.task = to_string(spec.task);
        rec.seed = cfg.seed;
        rec.max_steps = cfg.max_steps;
        rec.replan_horizon = cfg.replan_horizon;
        rec.outcome = Outcome::kError;
        rec.error = std::string(to_string(e.kind())) + ": " + e.what();
      }
      const auto path = records_dir / stem;
      const auto tmp = path.string() + ".tmp";
      {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw Error(ErrorKind::kIo, "cannot write " + tmp);
        os << serialize(rec);
      }
      std::filesystem::rename(tmp, path);

      EpisodeResult r = result_of(rec, cls, ms, job.team_size);
      std::lock_guard<std::mutex> lock(mu);
      out.results[i] = r;
      ++out.executed;
      if (progress) progress(r);
    }
  };
  const int threads = std::max(1, std::min<int>(spec.parallel, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  out.summary = summarize(out.results);
  write_csv(spec.output_dir / "episodes.csv", out.results);
  std::ofstream(spec.output_dir / "summary.csv") << format_summary(out.summary);
  return out;
}

}  // namespace mcox
