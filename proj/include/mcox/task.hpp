#pragma once

#include <optional>
#include <string>

#include "mcox/gridmap.hpp"

namespace mcox {

enum class TaskKind { kExplore, kSearch };

struct Task {
  TaskKind kind = TaskKind::kExplore;
  std::optional<Cell> target;  // required for kSearch

  static Task explore() { return {}; }
  static Task search(Cell target) { return {TaskKind::kSearch, target}; }
};

TaskKind parse_task_kind(const std::string& name);
std::string to_string(TaskKind k);

/// Search is solved once the target cell is no longer Unknown in the belief.
bool check_search_done(const GridMap& belief, Cell target);

}  // namespace mcox
