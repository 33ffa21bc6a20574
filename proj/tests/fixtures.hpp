// Hand-built maps and replies shared by unit and acceptance tests.
#pragma once

#include <string>
#include <vector>

#include "mcox/gridmap.hpp"

namespace fixtures {

using mcox::Cell;
using mcox::CellState;
using mcox::GridMap;

struct GapFixture {
  GridMap belief{1, 1};
  std::vector<Cell> gap;  // Free cells forming the opening, empty for gapless maps
  int width = 0;
};

// Known room above (or left of) a wall, unexplored space beyond it. The wall
// has one opening of `width` cells starting at `offset`.
inline GapFixture wall_gap(int width, int offset, bool vertical) {
  const int rows = 21, cols = 31;
  GridMap m(rows, cols, 1.0, CellState::kUnknown);
  std::vector<Cell> gap;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      CellState s = CellState::kUnknown;
      if (r < 10) s = (r == 0 || c == 0 || c == cols - 1) ? CellState::kOccupied : CellState::kFree;
      if (r == 10) {
        const bool open = c >= offset && c < offset + width;
        s = open ? CellState::kFree : CellState::kOccupied;
        if (open) gap.push_back({r, c});
      }
      m.set({r, c}, s);
    }
  if (!vertical) return {m, gap, width};
  GridMap t(cols, rows, 1.0, CellState::kUnknown);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) t.set({c, r}, m.at({r, c}));
  for (Cell& g : gap) g = {g.col, g.row};
  return {t, gap, width};
}

inline std::vector<GapFixture> gap_fixtures() {
  std::vector<GapFixture> out;
  int w = 2;
  for (int offset : {8, 13, 11, 6, 17}) out.push_back(wall_gap(w++, offset, false));
  w = 2;
  for (int offset : {20, 5, 14, 9, 12}) out.push_back(wall_gap(w++, offset, true));
  return out;
}

// Explored space bordering unexplored space with no opening narrower than
// the doorway limit: open fronts and wide corridors.
inline std::vector<GapFixture> gapless_fixtures() {
  std::vector<GapFixture> out;
  // open front of a walled room, several room widths
  for (int cols : {16, 22, 31}) {
    GridMap m(21, cols, 1.0, CellState::kUnknown);
    for (int r = 0; r < 10; ++r)
      for (int c = 0; c < cols; ++c)
        m.set({r, c}, (r == 0 || c == 0 || c == cols - 1) ? CellState::kOccupied : CellState::kFree);
    out.push_back({m, {}, 0});
  }
  // corridor of width 7..12 running into unexplored space
  for (int width : {7, 8, 9, 10, 12}) {
    GridMap m(24, 24, 1.0, CellState::kUnknown);
    const int left = 4;
    for (int r = 0; r < 12; ++r)
      for (int c = left - 1; c <= left + width; ++c)
        m.set({r, c}, (c == left - 1 || c == left + width || r == 0) ? CellState::kOccupied : CellState::kFree);
    out.push_back({m, {}, 0});
  }
  // unwalled diagonal boundary between known and unknown
  {
    GridMap m(25, 25, 1.0, CellState::kUnknown);
    for (int r = 0; r < 25; ++r)
      for (int c = 0; c < 25; ++c)
        if (r + c < 24) m.set({r, c}, CellState::kFree);
    out.push_back({m, {}, 0});
  }
  // explored room with a fully closed wall and a side opening onto unknown
  // space wider than the limit
  {
    GridMap m(21, 31, 1.0, CellState::kUnknown);
    for (int r = 0; r < 12; ++r)
      for (int c = 0; c < 20; ++c) {
        const bool wall = r == 0 || r == 11 || c == 0;
        m.set({r, c}, wall ? CellState::kOccupied : CellState::kFree);
      }
    out.push_back({m, {}, 0});
  }
  return out;
}

struct MessyReply {
  std::string name;
  std::string text;
  int robots;
  std::vector<std::vector<Cell>> expected;
  std::string summary;
};

// Replies in the styles chat models actually produce. Parsed against an
// all-Free 40x40 map unless noted.
inline std::vector<MessyReply> messy_replies() {
  return {
      {"prose around the block",
       "Sure! Looking at the map, the east wing is unexplored.\n\n"
       "ROBOT 0: (3,4) (5,6)\nROBOT 1: (10,12)\nSUMMARY: split east and south\n\nLet me know if you need more.",
       2,
       {{{3, 4}, {5, 6}}, {{10, 12}}},
       "split east and south"},
      {"markdown bold labels",
       "### Plan\n**ROBOT 0:** (1,1) (2,2)\n**ROBOT 1:** (7,8)\n**SUMMARY:** robots fan out from the entrance",
       2,
       {{{1, 1}, {2, 2}}, {{7, 8}}},
       "robots fan out from the entrance"},
      {"code fence and bullets",
       "```\n- Robot 0: (4, 4), (4, 9)\n- Robot 1: (12, 3)\n- Summary: cover both rooms\n```",
       2,
       {{{4, 4}, {4, 9}}, {{12, 3}}},
       "cover both rooms"},
      {"lower case and square brackets",
       "robot 0: [5,5] [6,6]\nrobot 1: [9,9]\nsummary: brackets instead of parentheses",
       2,
       {{{5, 5}, {6, 6}}, {{9, 9}}},
       "brackets instead of parentheses"},
      {"robot listed twice keeps the last line",
       "ROBOT 0: (1,2)\nROBOT 1: (3,4)\nOn reflection robot 0 should go further:\nROBOT 0: (20,21) (22,23)\n"
       "SUMMARY: revised robot 0",
       2,
       {{{20, 21}, {22, 23}}, {{3, 4}}},
       "revised robot 0"},
      {"summary on the following line",
       "ROBOT 0: (2,3)\nROBOT 1: (4,5)\nROBOT 2: (6,7)\nSUMMARY:\nthree robots, three corners",
       3,
       {{{2, 3}}, {{4, 5}}, {{6, 7}}},
       "three robots, three corners"},
      {"out of bounds and negative waypoints dropped",
       "ROBOT 0: (1,1) (45,2) (-1,3) (2,2)\nROBOT 1: (39,39)\nSUMMARY: edge case",
       2,
       {{{1, 1}, {2, 2}}, {{39, 39}}},
       "edge case"},
      {"robot with no waypoints and unknown robot id",
       "Robot 0: none, stay put\nRobot 1: (8,8)\nRobot 7: (1,1)\nPlan summary: robot 0 idles",
       2,
       {{}, {{8, 8}}},
       "robot 0 idles"},
      {"names with hash and parenthetical",
       "> Robot #0 (fast): (10,10) -> (12,10) -> (14,10)\n> Robot #1 (slow): (30,2)\n> SUMMARY: fast robot runs "
       "the corridor, slow one sweeps west",
       2,
       {{{10, 10}, {12, 10}, {14, 10}}, {{30, 2}}},
       "fast robot runs the corridor, slow one sweeps west"},
      {"windows line endings and inline code",
       "ROBOT 0: `(0,5)` `(0,6)`\r\nROBOT 1: `(11,11)`\r\nSUMMARY: `north edge, then centre`\r\n",
       2,
       {{{0, 5}, {0, 6}}, {{11, 11}}},
       "north edge, then centre"},
  };
}

}  // namespace fixtures

namespace fixtures {

// Two rooms joined by a doorway, deployment along the west side.
inline const char* kTwoRooms =
    "20 20 1\n"
    "####################\n"
    "#........#.........#\n"
    "#........#.........#\n"
    "#........#.........#\n"
    "#........#.........#\n"
    "#..................#\n"
    "#..................#\n"
    "#........#.........#\n"
    "#........#.........#\n"
    "#####.####.........#\n"
    "#####.####.........#\n"
    "#........#####.#####\n"
    "#........#.........#\n"
    "#........#.........#\n"
    "#..................#\n"
    "#........#.........#\n"
    "#........#.........#\n"
    "#........#.........#\n"
    "#........#.........#\n"
    "####################\n";

inline std::vector<Cell> two_rooms_zone() { return {{1, 1}, {2, 1}, {3, 1}, {1, 2}, {2, 2}, {3, 2}}; }

}  // namespace fixtures
