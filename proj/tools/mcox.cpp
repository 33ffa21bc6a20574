#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mcox/doorway.hpp"
#include "mcox/engine.hpp"
#include "mcox/error.hpp"
#include "mcox/frontier.hpp"
#include "mcox/harness.hpp"
#include "mcox/map_io.hpp"
#include "mcox/mapgen.hpp"

using namespace mcox;

namespace {

Cell parse_cell(const std::string& s) {
  int r = 0, c = 0;
  char comma = 0;
  std::istringstream is(s);
  if (!(is >> r >> comma >> c) || comma != ',') throw Error(ErrorKind::kConfig, "expected ROW,COL but got '" + s + "'");
  return {r, c};
}

std::vector<RobotState> parse_robots(const std::vector<std::string>& specs, int range) {
  std::vector<RobotState> robots;
  for (const auto& s : specs) {
    RobotState r;
    r.id = static_cast<int>(robots.size());
    r.position = parse_cell(s);
    r.detection_range = range;
    robots.push_back(r);
  }
  return robots;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mcox: multi-robot exploration and search simulator"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a batch experiment");
  std::string config_path, out_dir, task_name, class_name, composition, backend;
  std::vector<std::string> planner_names;
  std::vector<int> teams;
  std::uint64_t seed = 0;
  int parallel = 0, maps = 0, max_steps = 0;
  run->add_option("--config", config_path, "JSON experiment file");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--planner", planner_names, "planner(s)")->delimiter(',');
  run->add_option("--team", teams, "team size(s)")->delimiter(',');
  run->add_option("--task", task_name, "explore | search");
  run->add_option("--parallel", parallel, "worker threads");
  run->add_option("--map-class", class_name, "small | medium | large | cave");
  run->add_option("--maps", maps, "number of seeded maps");
  run->add_option("--composition", composition, "homogeneous | heterogeneous");
  run->add_option("--max-steps", max_steps, "override the class step limit");
  run->add_option("--backend", backend, "llm backend: mock | endpoint");

  // episode
  auto* ep = app.add_subcommand("episode", "run one episode and write its record");
  std::string ep_class = "small", ep_planner = "sample-greedy", ep_task = "explore", ep_out = "mcox_episode",
              ep_comp = "homogeneous", ep_backend = "mock";
  std::uint64_t ep_map_seed = 1, ep_seed = 0;
  int ep_team = 2, ep_snap = 0, ep_horizon = 60, ep_max = 0;
  ep->add_option("--map-class", ep_class);
  ep->add_option("--map-seed", ep_map_seed);
  ep->add_option("--planner", ep_planner);
  ep->add_option("--team", ep_team);
  ep->add_option("--composition", ep_comp);
  ep->add_option("--task", ep_task);
  ep->add_option("--seed", ep_seed);
  ep->add_option("--horizon", ep_horizon, "replan horizon T_H");
  ep->add_option("--max-steps", ep_max);
  ep->add_option("--snapshot-every", ep_snap, "belief PGM every N steps");
  ep->add_option("--backend", ep_backend);
  ep->add_option("--out", ep_out);

  // genmap
  auto* gen = app.add_subcommand("genmap", "generate a seeded map");
  std::string gen_class = "small", gen_out, gen_pgm;
  std::uint64_t gen_seed = 1;
  gen->add_option("--map-class,--class", gen_class);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out, "ASCII map file (stdout if omitted)");
  gen->add_option("--pgm", gen_pgm, "also write a PGM image");

  // frontiers / doorways
  auto* fr = app.add_subcommand("frontiers", "representative frontiers of a belief map");
  std::string fr_map;
  std::vector<std::string> fr_robots;
  std::uint64_t fr_seed = 0;
  int fr_range = 5;
  FrontierParams fparams;
  fr->add_option("--map", fr_map, "ASCII belief map")->required();
  fr->add_option("--robot", fr_robots, "ROW,COL (repeatable)")->required();
  fr->add_option("--seed", fr_seed);
  fr->add_option("--range", fr_range, "detection range");
  fr->add_option("--samples", fparams.samples);
  fr->add_option("--keep", fparams.keep);
  fr->add_option("--lambda", fparams.cost_weight);
  fr->add_option("--separation", fparams.min_separation);

  auto* dw = app.add_subcommand("doorways", "doorway candidates of a belief map");
  std::string dw_map;
  std::uint64_t dw_seed = 0;
  int dw_range = 5;
  DoorwayParams dparams;
  dw->add_option("--map", dw_map, "ASCII belief map")->required();
  dw->add_option("--seed", dw_seed);
  dw->add_option("--range", dw_range, "detection range");
  dw->add_option("--samples", dparams.samples);
  dw->add_option("--max-width", dparams.max_width);
  dw->add_option("--ray-length", dparams.ray_length);

  // compare
  auto* cmp = app.add_subcommand("compare", "percent change in mean steps between two planners");
  std::string cmp_csv, cmp_base, cmp_chal;
  cmp->add_option("--csv", cmp_csv, "episodes.csv from a run")->required();
  cmp->add_option("--baseline", cmp_base)->required();
  cmp->add_option("--challenger", cmp_chal)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentSpec spec = config_path.empty() ? ExperimentSpec{} : load_experiment(config_path);
      if (run->count("--seed")) spec.master_seed = seed;
      if (!out_dir.empty()) spec.output_dir = out_dir;
      if (!planner_names.empty()) {
        spec.planners.clear();
        for (const auto& p : planner_names) spec.planners.push_back(parse_planner_kind(p));
      }
      if (!teams.empty()) spec.team_sizes = teams;
      if (!task_name.empty()) spec.task = parse_task_kind(task_name);
      if (parallel > 0) spec.parallel = parallel;
      if (!class_name.empty()) spec.map_class = parse_map_class(class_name);
      if (maps > 0) spec.map_count = maps;
      if (!composition.empty()) spec.composition = parse_team_composition(composition);
      if (max_steps > 0) spec.max_steps = max_steps;
      if (backend == "endpoint") spec.planner_options.backend = LlmBackendKind::kEndpoint;
      else if (backend == "mock") spec.planner_options.backend = LlmBackendKind::kMock;
      else if (!backend.empty()) throw Error(ErrorKind::kConfig, "backend must be mock or endpoint");

      const auto result = run_experiment(spec, [](const EpisodeResult& r) { std::cerr << csv_line(r) << "\n"; });
      std::cerr << result.executed << " episode(s) run, " << result.results.size() - result.executed
                << " loaded from " << spec.output_dir.string() << "\n";
      std::cout << format_summary(result.summary);
    } else if (*ep) {
      const MapClass mc = parse_map_class(ep_class);
      const GeneratedMap gm = generate(mc, ep_map_seed);
      EpisodeConfig cfg;
      cfg.truth = gm.map;
      cfg.deploy_zone = gm.deploy_zone;
      cfg.team = make_team(parse_team_composition(ep_comp), ep_team);
      cfg.planner = parse_planner_kind(ep_planner);
      cfg.max_steps = ep_max > 0 ? ep_max : timestep_limit(mc);
      cfg.replan_horizon = ep_horizon;
      cfg.seed = ep_seed;
      cfg.snapshot_every = ep_snap;
      cfg.run_dir = ep_out;
      if (ep_backend == "endpoint") cfg.planner_options.backend = LlmBackendKind::kEndpoint;
      if (parse_task_kind(ep_task) == TaskKind::kSearch) {
        const Cell target = search_target(gm, ep_seed, ep_map_seed, DifficultyBand{});
        cfg.task = Task::search(target);
        cfg.initial_info = location_hint(gm.map, target);
      }
      const RunRecord rec = run_episode(cfg);
      std::ofstream(std::filesystem::path(ep_out) / "record.json") << serialize(rec);
      std::printf("%s %s after %d steps, coverage %.4f, %zu planning cycles, %.3f s planning\n", rec.planner.c_str(),
                  to_string(rec.outcome).c_str(), rec.outcome_step, rec.final_coverage, rec.cycles.size(),
                  rec.planning_seconds);
      if (rec.outcome == Outcome::kError) std::fprintf(stderr, "%s\n", rec.error.c_str());
    } else if (*gen) {
      const GeneratedMap gm = generate(parse_map_class(gen_class), gen_seed);
      if (gen_out.empty()) {
        write_ascii(std::cout, gm.map);
      } else {
        save_map(gen_out, gm.map);
      }
      if (!gen_pgm.empty()) save_pgm(gen_pgm, gm.map);
      std::fprintf(stderr, "%dx%d, %zu free cells, deploy zone %zu cells\n", gm.map.rows(), gm.map.cols(),
                   gm.map.count(CellState::kFree), gm.deploy_zone.size());
    } else if (*fr) {
      const GridMap belief = load_map(fr_map);
      const auto robots = parse_robots(fr_robots, fr_range);
      for (const auto& c : rank_and_select(belief, robots, fparams, fr_seed)) {
        std::printf("%s s=%.4f c=%.2f U=%.4f\n", to_string(c.cell).c_str(), c.info_gain, c.cost, c.utility);
      }
    } else if (*dw) {
      const GridMap belief = load_map(dw_map);
      for (const auto& d : detect_doorways(belief, dparams, dw_range, dw_seed)) {
        std::printf("%s axis=%.1f width=%.2f gain=%.4f\n", to_string(d.midpoint).c_str(), d.axis_deg, d.width,
                    d.info_gain);
      }
    } else if (*cmp) {
      const double pct = compare(read_csv(cmp_csv), cmp_base, cmp_chal);
      std::printf("%s vs %s: %+.2f%% mean steps reduction (timeouts counted at the step limit)\n", cmp_chal.c_str(),
                  cmp_base.c_str(), pct);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "mcox: %s: %s\n", to_string(e.kind()), e.what());
    return 2;
  }
  return 0;
}
