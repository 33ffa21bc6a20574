#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mcox/gridmap.hpp"

namespace mcox {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

inline constexpr std::uint8_t kRobotGray = 64;
inline constexpr int kMaxImageSide = 1024;

/// Belief raster: Unknown 255, Free 128, Occupied 0, robots kRobotGray.
/// Each cell is scale x scale pixels; the scale is reduced (and, for very
/// large maps, cells subsampled) so neither side exceeds kMaxImageSide.
GrayImage render_map_raster(const GridMap& belief, const std::vector<RobotState>& robots, int scale);

/// 8-bit grayscale PNG.
std::string encode_png(const GrayImage& image);

std::string render_map_image(const GridMap& belief, const std::vector<RobotState>& robots, int scale);

std::string base64_encode(std::string_view bytes);

}  // namespace mcox
