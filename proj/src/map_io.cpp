#include "mcox/map_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "mcox/error.hpp"

namespace mcox {

char to_char(CellState s) {
  switch (s) {
    case CellState::kFree: return '.';
    case CellState::kOccupied: return '#';
    case CellState::kUnknown: break;
  }
  return '?';
}

void write_ascii(std::ostream& os, const GridMap& map) {
  std::ostringstream res;
  res << std::setprecision(6) << map.resolution();
  os << map.rows() << ' ' << map.cols() << ' ' << res.str() << '\n';
  std::string line(static_cast<std::size_t>(map.cols()), '?');
  for (int r = 0; r < map.rows(); ++r) {
    for (int c = 0; c < map.cols(); ++c) line[c] = to_char(map[{r, c}]);
    os << line << '\n';
  }
}

GridMap read_ascii(std::istream& is) {
  int rows = 0, cols = 0;
  double res = 1.0;
  std::string header;
  if (!std::getline(is, header)) throw Error(ErrorKind::kIo, "map file: missing header");
  std::istringstream hs(header);
  if (!(hs >> rows >> cols >> res)) throw Error(ErrorKind::kIo, "map file: header must be 'H W r'");
  GridMap map(rows, cols, res);
  std::string line;
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(is, line)) throw Error(ErrorKind::kIo, "map file: expected " + std::to_string(rows) + " rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != cols) {
      throw Error(ErrorKind::kIo, "map file: row " + std::to_string(r) + " has width " +
                                      std::to_string(line.size()) + ", expected " + std::to_string(cols));
    }
    for (int c = 0; c < cols; ++c) {
      switch (line[c]) {
        case '#': map.set({r, c}, CellState::kOccupied); break;
        case '.': map.set({r, c}, CellState::kFree); break;
        case '?': break;
        default:
          throw Error(ErrorKind::kIo, std::string("map file: bad character '") + line[c] + "' in row " +
                                          std::to_string(r));
      }
    }
  }
  return map;
}

std::string to_ascii(const GridMap& map) {
  std::ostringstream os;
  write_ascii(os, map);
  return os.str();
}

GridMap from_ascii(const std::string& text) {
  std::istringstream is(text);
  return read_ascii(is);
}

void save_map(const std::filesystem::path& path, const GridMap& map) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_ascii(os, map);
}

GridMap load_map(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  return read_ascii(is);
}

std::uint8_t gray_level(CellState s) {
  switch (s) {
    case CellState::kFree: return 128;
    case CellState::kOccupied: return 0;
    case CellState::kUnknown: break;
  }
  return 255;
}

void write_pgm(std::ostream& os, const GridMap& map) {
  os << "P5\n" << map.cols() << ' ' << map.rows() << "\n255\n";
  for (CellState s : map.data()) os.put(static_cast<char>(gray_level(s)));
}

void save_pgm(const std::filesystem::path& path, const GridMap& map) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_pgm(os, map);
}

}  // namespace mcox
