#include "jpegvpr/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jpegvpr {

Image::Image(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c),
      pixels(static_cast<std::size_t>(w) * h * c, fill) {}

Image to_gray(const Image& image) {
  if (image.channels == 1) return image;
  Image gray(image.width, image.height, 1);
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* px = &image.pixels[i * image.channels];
    const double y = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
    gray.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
  }
  return gray;
}

Image crop(const Image& image, int x, int y, int w, int h) {
  if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > image.width || y + h > image.height) {
    throw std::out_of_range("crop rectangle outside image");
  }
  Image out(w, h, image.channels);
  const std::size_t row = static_cast<std::size_t>(w) * image.channels;
  for (int r = 0; r < h; ++r) {
    const auto* src = &image.pixels[(static_cast<std::size_t>(y + r) * image.width + x) * image.channels];
    std::copy(src, src + row, &out.pixels[r * row]);
  }
  return out;
}

GrayPlane resize_gray_bilinear(const Image& image, int width, int height) {
  const Image gray = to_gray(image);
  GrayPlane out{width, height, std::vector<double>(static_cast<std::size_t>(width) * height)};

  if (gray.width == width && gray.height == height) {
    std::transform(gray.pixels.begin(), gray.pixels.end(), out.values.begin(),
                   [](std::uint8_t v) { return static_cast<double>(v); });
    return out;
  }

  const double sx = static_cast<double>(gray.width) / width;
  const double sy = static_cast<double>(gray.height) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(gray.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, gray.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(gray.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, gray.width - 1);
      const double wx = fx - x0;
      const double top = gray.at(x0, y0) * (1.0 - wx) + gray.at(x1, y0) * wx;
      const double bottom = gray.at(x0, y1) * (1.0 - wx) + gray.at(x1, y1) * wx;
      out.values[static_cast<std::size_t>(y) * width + x] = top * (1.0 - wy) + bottom * wy;
    }
  }
  return out;
}

}  // namespace jpegvpr
