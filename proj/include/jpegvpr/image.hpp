#pragma once

#include <cstdint>
#include <vector>

namespace jpegvpr {

/// Interleaved 8-bit raster with 1 (gray) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 0);

  bool empty() const { return width <= 0 || height <= 0 || pixels.empty(); }
  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool operator==(const Image&) const = default;
};

/// BT.601 luma, Y = round(0.299 R + 0.587 G + 0.114 B). Gray input is copied.
Image to_gray(const Image& image);

/// Copies the rectangle [x, x+w) x [y, y+h). Throws std::out_of_range if it
/// does not fit inside the image.
Image crop(const Image& image, int x, int y, int w, int h);

/// Single-channel float plane, row-major.
struct GrayPlane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Luma of `image` resampled to width x height with bilinear interpolation
/// (pixel-center aligned, edge clamped). Same-size input is passed through
/// without resampling.
GrayPlane resize_gray_bilinear(const Image& image, int width, int height);

}  // namespace jpegvpr
