#include "mcox/llm_planner.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <regex>
#include <sstream>

#include "mcox/baseline.hpp"
#include "mcox/error.hpp"
#include "mcox/image.hpp"
#include "mcox/rng.hpp"

namespace mcox {

PlannerContext make_context(const GridMap& belief, TaskKind task, std::vector<RobotState> robots,
                            std::vector<FrontierCandidate> frontiers, std::vector<DoorwayCandidate> doorways,
                            std::optional<std::string> initial_info, std::string plan_summary,
                            std::vector<std::string> exec_summary, int image_scale) {
  PlannerContext ctx;
  ctx.task = task;
  ctx.map_rows = belief.rows();
  ctx.map_cols = belief.cols();
  const GrayImage img = render_map_raster(belief, robots, image_scale);
  ctx.map_png = encode_png(img);
  ctx.image_width = img.width;
  ctx.image_height = img.height;
  ctx.image_scale = img.width / std::max(1, belief.cols());
  ctx.robots = std::move(robots);
  ctx.frontiers = std::move(frontiers);
  ctx.doorways = std::move(doorways);
  ctx.initial_info = std::move(initial_info);
  if (plan_summary.size() > kPlanSummaryLimit) plan_summary.resize(kPlanSummaryLimit);
  ctx.plan_summary = std::move(plan_summary);
  ctx.exec_summary = std::move(exec_summary);
  return ctx;
}

std::string Prompt::transcript() const {
  return text + "\n[attached image: image/png, " + std::to_string(image_base64.size()) + " base64 characters]\n";
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

Prompt build_prompt(const PlannerContext& ctx) {
  std::ostringstream os;
  const bool search = ctx.task == TaskKind::kSearch;
  os << "You are the central planner for a team of " << ctx.robots.size() << " robot"
     << (ctx.robots.size() == 1 ? "" : "s") << (search ? " searching" : " exploring")
     << " an unknown 2D environment represented as a shared occupancy grid.\n";
  if (search) {
    os << "TASK: Find the object of interest as quickly as possible. The search ends as soon as any robot "
          "observes the cell that contains it.\n";
  } else {
    os << "TASK: Explore every reachable part of the environment in as few timesteps as possible.\n";
  }
  os << "\nMAP: " << ctx.map_rows << " rows x " << ctx.map_cols
     << " columns. Coordinates are (row,col) with (0,0) at the top-left corner; row grows southward and col "
        "grows eastward.\n"
     << "The attached grayscale image (" << ctx.image_width << "x" << ctx.image_height << " pixels, "
     << ctx.image_scale << "x" << ctx.image_scale
     << " pixels per cell) shows the shared map: white = unknown, gray = free, black = occupied, dark gray = "
        "robot.\n";

  os << "\nROBOTS (id: position, detection range in cells, max speed in cells per timestep):\n";
  for (const auto& r : ctx.robots) {
    os << "- Robot " << r.id << ": position " << to_string(r.position) << ", detection range "
       << r.detection_range << ", max speed " << r.max_speed << "\n";
  }

  os << "\nREPRESENTATIVE FRONTIERS ((row,col), information gain s, utility U):\n";
  if (ctx.frontiers.empty()) os << "- none\n";
  for (const auto& f : ctx.frontiers) {
    os << "- " << to_string(f.cell) << " s=" << fixed3(f.info_gain) << " U=" << fixed3(f.utility) << "\n";
  }

  os << "\nPOTENTIAL DOORWAYS ((row,col), information gain):\n";
  if (ctx.doorways.empty()) os << "- none\n";
  for (const auto& d : ctx.doorways) {
    os << "- " << to_string(d.midpoint) << " gain=" << fixed3(d.info_gain) << "\n";
  }

  if (ctx.initial_info) os << "\nKEY INITIAL INFORMATION:\n" << *ctx.initial_info << "\n";

  os << "\nPREVIOUS PLAN SUMMARY:\n"
     << (ctx.plan_summary.empty() ? "none (first planning cycle)" : ctx.plan_summary) << "\n";

  os << "\nEXECUTION SUMMARY:\n";
  if (ctx.exec_summary.empty()) os << "all waypoints reached\n";
  for (const auto& e : ctx.exec_summary) os << "- " << e << "\n";

  os << "\nINSTRUCTIONS:\n"
     << "Assign every robot an ordered sequence of waypoints. The number of waypoints may differ between robots. "
        "Spread the robots so they do not duplicate work, and use each robot's detection range and speed when "
        "deciding how far to send it.\n"
     << "Waypoints do not have to be taken from the frontier or doorway lists: you may choose any free or "
        "unknown cell that looks promising in the map image. Never choose occupied cells, and avoid waypoints "
        "reported as unreachable.\n"
     << "Finish your reply with exactly one line per robot followed by one summary line, in this format:\n";
  for (std::size_t i = 0; i < std::max<std::size_t>(ctx.robots.size(), 1); ++i) {
    os << "ROBOT " << (ctx.robots.empty() ? 0 : ctx.robots[i].id) << ": (row,col) (row,col) ...\n";
  }
  os << "SUMMARY: <one short paragraph describing the plan, to be shown to you in the next planning cycle>\n";

  return {os.str(), base64_encode(ctx.map_png)};
}

std::string format_response(const PlanResponse& plan) {
  std::ostringstream os;
  for (std::size_t i = 0; i < plan.waypoints.size(); ++i) {
    os << "ROBOT " << i << ":";
    for (Cell c : plan.waypoints[i]) os << " " << to_string(c);
    os << "\n";
  }
  std::string summary = plan.summary;
  std::replace(summary.begin(), summary.end(), '\n', ' ');
  std::replace(summary.begin(), summary.end(), '\r', ' ');
  os << "SUMMARY: " << summary << "\n";
  return os.str();
}

namespace {

std::string trim(const std::string& s, const char* junk = " \t\r") {
  const auto b = s.find_first_not_of(junk);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(junk);
  return s.substr(b, e - b + 1);
}

// Summary text taken from the raw line so inner punctuation survives.
std::string summary_text(const std::string& raw_line) {
  std::string lower = raw_line;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  const auto key = lower.find("summary");
  const auto colon = raw_line.find(':', key == std::string::npos ? 0 : key);
  if (colon == std::string::npos) return "";
  return trim(raw_line.substr(colon + 1), " \t\r*`");
}

// Drops markdown emphasis and code ticks.
std::string strip_markup(std::string line) {
  line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == '*' || c == '`'; }),
             line.end());
  return line;
}

}  // namespace

PlanResponse parse_response(const std::string& raw, const GridMap& belief, int robot_count) {
  static const std::regex robot_re(R"(^[\s>\-+#]*robot\s*#?\s*(\d+)\s*(\([^)]*\))?\s*[:=]\s*(.*)$)",
                                   std::regex::icase);
  static const std::regex summary_re(R"(^[\s>\-+#]*(?:plan\s+)?summary\s*:\s*(.*)$)", std::regex::icase);
  static const std::regex coord_re(R"([\(\[]\s*(-?\d+)\s*,\s*(-?\d+)\s*[\)\]])");

  PlanResponse plan;
  plan.waypoints.resize(static_cast<std::size_t>(std::max(robot_count, 0)));
  std::vector<bool> seen(plan.waypoints.size(), false);
  std::size_t robot_lines = 0;
  bool want_summary_line = false;

  std::istringstream is(raw);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();  // '.' in std::regex stops at CR
    const std::string clean = strip_markup(line);
    std::smatch m;
    const bool is_robot_line = std::regex_match(clean, m, robot_re);
    if (want_summary_line && !trim(clean).empty()) {
      want_summary_line = false;
      if (!is_robot_line) {
        plan.summary = trim(line, " \t\r*`");
        continue;
      }
    }
    if (is_robot_line) {
      const long id = std::stol(m[1].str());
      if (id < 0 || id >= robot_count) {
        plan.warnings.push_back("ignored line for unknown robot " + m[1].str());
        continue;
      }
      const auto idx = static_cast<std::size_t>(id);
      if (seen[idx]) plan.warnings.push_back("robot " + m[1].str() + " listed more than once; using the last line");
      seen[idx] = true;
      ++robot_lines;
      std::vector<Cell> queue;
      const std::string rest = m[3].str();
      for (auto it = std::sregex_iterator(rest.begin(), rest.end(), coord_re); it != std::sregex_iterator(); ++it) {
        const Cell c{std::stoi((*it)[1].str()), std::stoi((*it)[2].str())};
        if (!belief.in_bounds(c)) {
          plan.warnings.push_back("dropped out-of-bounds waypoint " + to_string(c) + " for robot " + m[1].str());
        } else if (belief[c] == CellState::kOccupied) {
          plan.warnings.push_back("dropped occupied waypoint " + to_string(c) + " for robot " + m[1].str());
        } else {
          queue.push_back(c);
        }
      }
      plan.waypoints[idx] = std::move(queue);
    } else if (std::regex_match(clean, m, summary_re)) {
      plan.summary = summary_text(line);
      want_summary_line = plan.summary.empty();
    }
  }
  if (robot_lines == 0) throw Error(ErrorKind::kParseFailure, "response contains no ROBOT lines");
  return plan;
}

PlanResponse mock_planner(const PlannerContext& ctx, std::uint64_t seed) {
  PlanResponse plan;
  plan.waypoints.resize(ctx.robots.size());
  std::vector<Cell> pool;
  for (const auto& f : ctx.frontiers) pool.push_back(f.cell);
  for (const auto& d : ctx.doorways) pool.push_back(d.midpoint);
  std::vector<Cell> unique;
  for (Cell c : pool) {
    if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(c);
  }
  if (unique.empty()) {
    plan.summary = "no candidates";
    return plan;
  }

  auto tie_key = [seed](Cell c) {
    return mix_seed(seed, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.row)) << 32) |
                              static_cast<std::uint32_t>(c.col));
  };
  const auto parts = voronoi_partition(unique, ctx.robots);
  std::ostringstream summary;
  summary << "Voronoi split of " << unique.size() << " candidates;";
  for (std::size_t i = 0; i < ctx.robots.size(); ++i) {
    std::vector<Cell> left = parts[i];
    Cell here = ctx.robots[i].position;
    auto& queue = plan.waypoints[static_cast<std::size_t>(ctx.robots[i].id)];
    while (!left.empty() && queue.size() < kMockQueueCap) {
      auto best = left.begin();
      for (auto it = left.begin() + 1; it != left.end(); ++it) {
        const int d = squared_distance(here, *it), bd = squared_distance(here, *best);
        if (d < bd || (d == bd && tie_key(*it) < tie_key(*best))) best = it;
      }
      here = *best;
      queue.push_back(here);
      left.erase(best);
    }
    summary << " robot " << ctx.robots[i].id << " covers " << parts[i].size() << " candidate"
            << (parts[i].size() == 1 ? "" : "s");
    if (!queue.empty()) summary << " starting at " << to_string(queue.front());
    summary << ";";
  }
  plan.summary = summary.str();
  return plan;
}

}  // namespace mcox
