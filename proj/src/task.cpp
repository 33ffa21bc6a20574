#include "mcox/task.hpp"

#include "mcox/error.hpp"

namespace mcox {

TaskKind parse_task_kind(const std::string& name) {
  if (name == "explore") return TaskKind::kExplore;
  if (name == "search") return TaskKind::kSearch;
  throw Error(ErrorKind::kConfig, "unknown task '" + name + "' (explore|search)");
}

std::string to_string(TaskKind k) { return k == TaskKind::kExplore ? "explore" : "search"; }

bool check_search_done(const GridMap& belief, Cell target) { return belief.at(target) != CellState::kUnknown; }

}  // namespace mcox
