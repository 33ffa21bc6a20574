#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mcox/gridmap.hpp"

namespace mcox {

// ASCII map format: header line "H W r", then H lines of W characters:
// '#' Occupied, '.' Free, '?' Unknown.
char to_char(CellState s);
void write_ascii(std::ostream& os, const GridMap& map);
GridMap read_ascii(std::istream& is);
std::string to_ascii(const GridMap& map);
GridMap from_ascii(const std::string& text);

void save_map(const std::filesystem::path& path, const GridMap& map);
GridMap load_map(const std::filesystem::path& path);

/// Gray level used for a cell in every raster export: Unknown 255 (white),
/// Free 128 (gray), Occupied 0 (black).
std::uint8_t gray_level(CellState s);

/// Binary PGM (P5), one pixel per cell.
void write_pgm(std::ostream& os, const GridMap& map);
void save_pgm(const std::filesystem::path& path, const GridMap& map);

}  // namespace mcox
