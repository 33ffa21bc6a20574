#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "mcox/error.hpp"
#include "mcox/gridmap.hpp"
#include "mcox/map_io.hpp"
#include "mcox/rng.hpp"
#include "oracles.hpp"

using namespace mcox;

TEST_CASE("rng is reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(7);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.uniform_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    seen.insert(v);
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(seen.size() == 7);
  CHECK(r.uniform_int(5, 5) == 5);
}

TEST_CASE("sample draws distinct elements, all of them when k exceeds size") {
  Rng r(3);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto s = r.sample(v, 4);
  CHECK(s.size() == 4);
  CHECK(std::set<int>(s.begin(), s.end()).size() == 4);
  auto all = r.sample(v, 100);
  std::sort(all.begin(), all.end());
  CHECK(all == v);
}

TEST_CASE("mix_seed and hash_string spread inputs") {
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(hash_string("sample-greedy") != hash_string("sample-dvc"));
  CHECK(hash_string("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("grid construction and bounds") {
  CHECK_THROWS_AS(GridMap(0, 3), Error);
  GridMap m(3, 4);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 4);
  CHECK(m.count(CellState::kUnknown) == 12);
  CHECK(m.in_bounds({2, 3}));
  CHECK_FALSE(m.in_bounds({3, 0}));
  CHECK_FALSE(m.in_bounds({0, -1}));
  CHECK_THROWS_AS(m.at({5, 5}), Error);
  m.set({1, 1}, CellState::kFree);
  CHECK(m.is_free({1, 1}));
}

TEST_CASE("segment traversal steps diagonally through lattice corners") {
  std::vector<Cell> cells;
  trace_segment({0, 0}, {2, 2}, [&](Cell c) {
    cells.push_back(c);
    return true;
  });
  CHECK(cells == std::vector<Cell>{{0, 0}, {1, 1}, {2, 2}});

  cells.clear();
  trace_segment({0, 0}, {1, 3}, [&](Cell c) {
    cells.push_back(c);
    return true;
  });
  CHECK(cells == std::vector<Cell>{{0, 0}, {0, 1}, {1, 2}, {1, 3}});
}

TEST_CASE("lidar in open space sees the whole disk") {
  GridMap truth(11, 11, 1.0, CellState::kFree);
  const auto obs = lidar_scan(truth, {5, 5}, 3);
  CHECK(obs.size() == disk_cells(truth, {5, 5}, 3).size());
  CHECK(obs.size() == 29);
}

TEST_CASE("lidar stops at walls but sees the wall cell") {
  GridMap truth(7, 7, 1.0, CellState::kFree);
  for (int r = 0; r < 7; ++r) truth.set({r, 4}, CellState::kOccupied);
  std::set<Cell> seen;
  for (const auto& [c, s] : lidar_scan(truth, {3, 2}, 4)) seen.insert(c);
  CHECK(seen.count({3, 4}));
  CHECK_FALSE(seen.count({3, 5}));
  CHECK_FALSE(seen.count({3, 6}));
}

TEST_CASE("lidar matches the ray oracle on random maps") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    auto truth = oracle::random_map(seed, 15, 15, 0.25);
    std::uint64_t s = seed;
    const Cell pose = oracle::random_free(truth, s);
    std::set<Cell> got;
    for (const auto& [c, st] : lidar_scan(truth, pose, 6)) got.insert(c);
    CHECK(got == oracle::visible(truth, pose, 6));
  }
}

TEST_CASE("lidar pose errors") {
  GridMap truth(5, 5, 1.0, CellState::kFree);
  truth.set({2, 2}, CellState::kOccupied);
  CHECK_THROWS_AS(lidar_scan(truth, {2, 2}, 3), Error);
  CHECK_THROWS_AS(lidar_scan(truth, {9, 9}, 3), Error);
  CHECK_THROWS_AS(lidar_scan(truth, {0, 0}, 0), Error);
}

TEST_CASE("merge overwrites and rejects Unknown observations") {
  GridMap b = new_belief(3, 3);
  merge_into(b, {{{0, 0}, CellState::kFree}, {{1, 1}, CellState::kOccupied}});
  CHECK(b.at({0, 0}) == CellState::kFree);
  CHECK(b.at({1, 1}) == CellState::kOccupied);
  try {
    merge_into(b, {{{2, 2}, CellState::kUnknown}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidObservation);
  }
}

TEST_CASE("reachable, relevant and coverage") {
  GridMap truth = from_ascii(
      "5 5 1\n"
      "#####\n"
      "#..##\n"
      "#.#.#\n"
      "#####\n"
      "#####\n");
  const auto reach = reachable_free(truth, {1, 1});
  CHECK(reach.size() == 3);
  CHECK_FALSE(reach.contains({2, 3}));
  const auto rel = relevant_cells(truth, reach);
  CHECK(rel.contains({0, 1}));
  CHECK_FALSE(rel.contains({4, 4}));
  GridMap belief = new_belief(5, 5);
  CHECK(coverage_fraction(belief, truth, reach) == 0.0);
  CHECK_FALSE(exploration_complete(belief, truth, reach));
  for (Cell c : rel.cells()) belief.set(c, truth.at(c));
  CHECK(coverage_fraction(belief, truth, reach) == 1.0);
  CHECK(exploration_complete(belief, truth, reach));
  CHECK_THROWS_AS(coverage_fraction(new_belief(4, 4), truth, reach), Error);
}

TEST_CASE("ascii and pgm round trip") {
  GridMap m(2, 3, 0.5, CellState::kUnknown);
  m.set({0, 0}, CellState::kFree);
  m.set({1, 2}, CellState::kOccupied);
  const std::string text = to_ascii(m);
  CHECK(text == "2 3 0.5\n.??\n??#\n");
  CHECK(from_ascii(text) == m);
  CHECK_THROWS_AS(from_ascii("2 2 1\n..\n.x\n"), Error);
  CHECK_THROWS_AS(from_ascii("2 2 1\n..\n"), Error);

  const auto dir = std::filesystem::temp_directory_path() / "mcox_core_io";
  std::filesystem::create_directories(dir);
  save_map(dir / "m.txt", m);
  CHECK(load_map(dir / "m.txt") == m);
  save_pgm(dir / "m.pgm", m);
  CHECK(std::filesystem::file_size(dir / "m.pgm") > 6);
  CHECK(gray_level(CellState::kUnknown) == 255);
  CHECK(gray_level(CellState::kFree) == 128);
  CHECK(gray_level(CellState::kOccupied) == 0);
}
