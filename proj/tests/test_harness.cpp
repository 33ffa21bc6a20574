#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mcox/error.hpp"
#include "mcox/harness.hpp"

using namespace mcox;

namespace {

EpisodeResult row(const std::string& planner, std::uint64_t seed, Outcome o, int steps, int team = 2) {
  EpisodeResult r;
  r.map_class = "small";
  r.map_seed = seed;
  r.planner = planner;
  r.team_size = team;
  r.task = "explore";
  r.outcome = o;
  r.steps = steps;
  r.coverage_at_end = o == Outcome::kCompleted ? 1.0 : 0.9;
  return r;
}

std::filesystem::path fresh_dir(const char* name) {
  const auto d = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("quantiles interpolate linearly") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile({7}, 0.75) == 7.0);
  CHECK_THROWS_AS(quantile({}, 0.5), Error);
}

TEST_CASE("summary groups by class, team and planner") {
  const std::vector<EpisodeResult> rows{row("a", 1, Outcome::kCompleted, 100), row("a", 2, Outcome::kTimeout, 1000),
                                        row("a", 3, Outcome::kError, 5), row("b", 1, Outcome::kCompleted, 50)};
  const auto t = summarize(rows);
  REQUIRE(t.size() == 2);
  CHECK(t[0].planner == "a");
  CHECK(t[0].episodes == 3);
  CHECK(t[0].completed + t[0].timeouts + t[0].errors == t[0].episodes);
  CHECK(t[0].min == 100);
  CHECK(t[0].max == 1000);
  CHECK(t[0].median == doctest::Approx(550));
  CHECK(t[0].mean_steps == doctest::Approx(550));
  CHECK(t[0].min <= t[0].q1);
  CHECK(t[0].q1 <= t[0].median);
  CHECK(t[0].median <= t[0].q3);
  CHECK(t[0].q3 <= t[0].max);
  CHECK(t[1].median == 50);
}

TEST_CASE("compare reports the mean step reduction") {
  std::vector<EpisodeResult> rows{row("base", 1, Outcome::kCompleted, 100), row("base", 2, Outcome::kTimeout, 1000),
                                  row("half", 1, Outcome::kCompleted, 50), row("half", 2, Outcome::kCompleted, 500)};
  CHECK(compare(rows, "base", "base") == 0.0);
  CHECK(compare(rows, "base", "half") == doctest::Approx(50.0));
  rows.push_back(row("lonely", 9, Outcome::kCompleted, 10));
  try {
    compare(rows, "base", "lonely");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUndefinedComparison);
  }
  CHECK_THROWS_AS(compare(rows, "base", "missing"), Error);
}

TEST_CASE("csv round trip") {
  const auto dir = fresh_dir("mcox_csv");
  std::filesystem::create_directories(dir);
  const std::vector<EpisodeResult> rows{row("sample-greedy", 3, Outcome::kCompleted, 321),
                                        row("llm", 4, Outcome::kError, 0)};
  write_csv(dir / "e.csv", rows);
  const auto back = read_csv(dir / "e.csv");
  REQUIRE(back.size() == 2);
  CHECK(csv_line(back[0]) == csv_line(rows[0]));
  CHECK(csv_line(back[1]) == csv_line(rows[1]));
  std::ifstream is(dir / "e.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "map_class,map_seed,planner,team_size,task,outcome,steps,coverage_at_end");
}

TEST_CASE("episode seeds differ per cell") {
  const auto s = episode_seed(1, 2, 3, "llm");
  CHECK(s == episode_seed(1, 2, 3, "llm"));
  CHECK(s != episode_seed(1, 2, 3, "sample-dvc"));
  CHECK(s != episode_seed(1, 2, 4, "llm"));
  CHECK(s != episode_seed(1, 3, 3, "llm"));
  CHECK(s != episode_seed(2, 2, 3, "llm"));
}

TEST_CASE("team compositions") {
  const auto homo = make_team(TeamComposition::kHomogeneous, 3);
  for (const auto& r : homo) CHECK((r.detection_range == 5 && r.max_speed == 1));
  const auto het = make_team(TeamComposition::kHeterogeneous, 4);
  CHECK((het[0].max_speed == 3 && het[0].detection_range == 5));
  CHECK((het[1].max_speed == 1 && het[1].detection_range == 10));
  CHECK(het[2].max_speed == 3);
  CHECK_THROWS_AS(make_team(TeamComposition::kHomogeneous, 0), Error);
}

TEST_CASE("location hints name the map region") {
  const GridMap m(60, 60);
  CHECK(location_hint(m, {2, 58}).find("northeastern") != std::string::npos);
  CHECK(location_hint(m, {30, 30}).find("central") != std::string::npos);
  CHECK(location_hint(m, {59, 0}).find("southwestern") != std::string::npos);
}

TEST_CASE("config files are parsed strictly") {
  const auto j = nlohmann::json::parse(R"({
    "map_class": "small", "map_count": 3, "team_sizes": [1, 2],
    "composition": "heterogeneous", "planners": ["sample-greedy", "llm"],
    "task": "search", "difficulty": {"min": 0.4, "max": 0.8}, "seed": 9,
    "replan_horizon": 40, "frontier": {"samples": 100},
    "llm": {"backend": "mock", "model": "m", "image_scale": 2},
    "output_dir": "/tmp/x", "parallel": 2
  })");
  const auto spec = experiment_from_json(j);
  CHECK(spec.map_count == 3);
  CHECK(spec.team_sizes == std::vector<int>{1, 2});
  CHECK(spec.composition == TeamComposition::kHeterogeneous);
  CHECK(spec.planners == std::vector<PlannerKind>{PlannerKind::kSampleGreedy, PlannerKind::kLlm});
  CHECK(spec.task == TaskKind::kSearch);
  CHECK(spec.difficulty.min_fraction == 0.4);
  CHECK(spec.master_seed == 9);
  CHECK(spec.replan_horizon == 40);
  CHECK(spec.frontier.samples == 100);
  CHECK(spec.planner_options.endpoint.model == "m");
  CHECK(spec.planner_options.endpoint.image_scale == 2);
  CHECK(spec.parallel == 2);

  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(R"({"maps": 3})")), Error);
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(R"({"planners": ["magic"]})")), Error);
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(R"({"map_count": 0})")), Error);
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(R"({"map_count": "two"})")), Error);
}

TEST_CASE("experiment runs every cell once and resumes from disk") {
  ExperimentSpec spec;
  spec.map_count = 2;
  spec.team_sizes = {2};
  spec.planners = {PlannerKind::kSampleGreedy, PlannerKind::kSampleDvc};
  spec.output_dir = fresh_dir("mcox_experiment");
  spec.parallel = 2;
  const auto first = run_experiment(spec);
  CHECK(first.executed == 4);
  CHECK(first.results.size() == 4);
  CHECK(first.summary.size() == 2);
  CHECK(std::filesystem::exists(spec.output_dir / "episodes.csv"));
  CHECK(std::filesystem::exists(spec.output_dir / "summary.csv"));
  CHECK(read_csv(spec.output_dir / "episodes.csv").size() == 4);

  const auto again = run_experiment(spec);
  CHECK(again.executed == 0);
  CHECK(format_summary(again.summary) == format_summary(first.summary));

  spec.parallel = 1;
  spec.output_dir = fresh_dir("mcox_experiment_serial");
  CHECK(format_summary(run_experiment(spec).summary) == format_summary(first.summary));
}

TEST_CASE("single episode table has equal quartiles") {
  ExperimentSpec spec;
  spec.map_count = 1;
  spec.team_sizes = {1};
  spec.output_dir = fresh_dir("mcox_single");
  const auto out = run_experiment(spec);
  REQUIRE(out.summary.size() == 1);
  const auto& s = out.summary[0];
  CHECK(s.min == s.q1);
  CHECK(s.q1 == s.median);
  CHECK(s.median == s.q3);
  CHECK(s.q3 == s.max);
}

TEST_CASE("search experiments share one target per map") {
  ExperimentSpec spec;
  spec.map_count = 2;
  spec.team_sizes = {2};
  spec.task = TaskKind::kSearch;
  spec.planners = {PlannerKind::kSampleGreedy, PlannerKind::kLlmInformed};
  spec.output_dir = fresh_dir("mcox_search");
  const auto out = run_experiment(spec);
  for (const auto& r : out.results) {
    CHECK(r.task == "search");
    CHECK(r.outcome == Outcome::kCompleted);
  }
  const auto gm = generate(MapClass::kSmall, 1);
  const Cell t = search_target(gm, 0, 1, spec.difficulty);
  CHECK(t == search_target(gm, 0, 1, spec.difficulty));
}
