#include "mcox/image.hpp"

#include <zlib.h>

#include <algorithm>

#include "mcox/error.hpp"
#include "mcox/map_io.hpp"

namespace mcox {

GrayImage render_map_raster(const GridMap& belief, const std::vector<RobotState>& robots, int scale) {
  if (scale < 1) throw Error(ErrorKind::kInvalidArgument, "image scale must be >= 1");
  const int side = std::max(belief.rows(), belief.cols());
  int stride = 1;  // cells per pixel when even scale 1 is too large
  if (side > kMaxImageSide) {
    stride = (side + kMaxImageSide - 1) / kMaxImageSide;
    scale = 1;
  } else {
    scale = std::min(scale, std::max(1, kMaxImageSide / side));
  }
  const int rows = (belief.rows() + stride - 1) / stride;
  const int cols = (belief.cols() + stride - 1) / stride;

  std::vector<std::uint8_t> cell_gray(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) cell_gray[static_cast<std::size_t>(r) * cols + c] = gray_level(belief[{r * stride, c * stride}]);
  for (const auto& robot : robots) {
    if (!belief.in_bounds(robot.position)) continue;
    cell_gray[static_cast<std::size_t>(robot.position.row / stride) * cols + robot.position.col / stride] = kRobotGray;
  }

  GrayImage img;
  img.width = cols * scale;
  img.height = rows * scale;
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      img.pixels[static_cast<std::size_t>(y) * img.width + x] = cell_gray[static_cast<std::size_t>(y / scale) * cols + x / scale];
  return img;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>(v & 0xFF));
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  std::string body(type, 4);
  body += data;
  out += body;
  put_u32(out, static_cast<std::uint32_t>(
                   crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()))));
}

}  // namespace

std::string encode_png(const GrayImage& image) {
  std::string raw;
  raw.reserve(static_cast<std::size_t>(image.width + 1) * image.height);
  for (int y = 0; y < image.height; ++y) {
    raw.push_back('\0');  // filter: none
    raw.append(reinterpret_cast<const char*>(image.pixels.data()) + static_cast<std::size_t>(y) * image.width,
               static_cast<std::size_t>(image.width));
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::string packed(packed_size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(packed.data()), &packed_size, reinterpret_cast<const Bytef*>(raw.data()),
                static_cast<uLong>(raw.size()), 9) != Z_OK) {
    throw Error(ErrorKind::kIo, "zlib compression failed");
  }
  packed.resize(packed_size);

  std::string ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(image.width));
  put_u32(ihdr, static_cast<std::uint32_t>(image.height));
  ihdr += std::string("\x08\x00\x00\x00\x00", 5);  // 8-bit gray, deflate, no filter, no interlace

  std::string png("\x89PNG\r\n\x1a\n", 8);
  put_chunk(png, "IHDR", ihdr);
  put_chunk(png, "IDAT", packed);
  put_chunk(png, "IEND", "");
  return png;
}

std::string render_map_image(const GridMap& belief, const std::vector<RobotState>& robots, int scale) {
  return encode_png(render_map_raster(belief, robots, scale));
}

std::string base64_encode(std::string_view bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (static_cast<std::uint8_t>(bytes[i]) << 16) |
                            (static_cast<std::uint8_t>(bytes[i + 1]) << 8) | static_cast<std::uint8_t>(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = static_cast<std::uint8_t>(bytes[i]) << 16;
    if (i + 1 < bytes.size()) v |= static_cast<std::uint8_t>(bytes[i + 1]) << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

}  // namespace mcox
