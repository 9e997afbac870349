#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exprog/world.hpp"

namespace exprog {

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sRGB fill used for every rendering of a color.
std::array<std::uint8_t, 3> color_rgb(Color c);
std::string color_hex(Color c);

/// Single state as a standalone SVG document, `size` pixels square.
std::string frame_svg(const WorldState& w, const World& world, std::size_t index, int size = 480);
/// Initial layout, final layout outlines and the agent path.
std::string summary_svg(const Trajectory& tau, const World& world, int size = 480);

/// State indices 0, stride, 2 stride, ... plus the last state.
std::vector<std::size_t> frame_indices(std::size_t state_count, std::size_t stride);

struct RenderedFiles {
  std::vector<std::filesystem::path> frames;
  std::filesystem::path summary;
};

/// Writes frame_XXXX.svg files (and summary.svg when asked). Throws RenderError on an empty trace.
RenderedFiles render_trace(const Trajectory& tau, const World& world, std::size_t stride,
                           const std::filesystem::path& out, bool summary = true);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image(int w, int h, std::array<std::uint8_t, 3> fill = {255, 255, 255});
  void set(int x, int y, std::array<std::uint8_t, 3> c);
  std::array<std::uint8_t, 3> at(int x, int y) const;
};

/// Point-sampled raster of a state, same layout as frame_svg.
Image rasterize(const WorldState& w, const World& world, int size = 256);
/// 8-bit RGB PNG.
std::string encode_png(const Image& image);
std::string base64_encode(std::string_view bytes);

}  // namespace exprog
