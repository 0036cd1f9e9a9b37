#include "jpegvpr/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jpegvpr/error.hpp"
#include "jpegvpr/parallel.hpp"

namespace jpegvpr {

namespace {

constexpr double kHysClip = 0.2;

// In-place L2-Hys; all-zero stays all-zero.
void l2_hys(std::span<double> v) {
  auto l2 = [&] {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
  };
  double norm = l2();
  if (norm <= kNormEpsilon) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  for (double& x : v) x = std::min(x / norm, kHysClip);
  norm = l2();
  if (norm <= kNormEpsilon) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  for (double& x : v) x /= norm;
}

}  // namespace

void DescriptorSet::validate() const {
  if (descriptors.empty()) throw DataError("empty set");
  if (filenames.size() != descriptors.size()) {
    throw DataError("descriptor set has " + std::to_string(descriptors.size()) + " descriptors but " +
                    std::to_string(filenames.size()) + " filenames");
  }
  const std::size_t d = descriptors.front().dim();
  if (d == 0) throw DataError("descriptor dimension is 0");
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    if (descriptors[i].dim() != d) {
      throw DataError("descriptor " + std::to_string(i) + " has dim " +
                      std::to_string(descriptors[i].dim()) + ", expected " + std::to_string(d));
    }
    for (float x : descriptors[i].values) {
      if (!std::isfinite(x)) throw DataError("descriptor " + std::to_string(i) + " has a non-finite value");
    }
  }
}

std::size_t HogParams::dimension() const {
  return static_cast<std::size_t>(blocks_x()) * blocks_y() * block * block * bins;
}

void HogParams::validate() const {
  if (cell <= 0 || resize_width <= 0 || resize_height <= 0) {
    throw ConfigError("HOG resize and cell size must be positive");
  }
  if (resize_width % cell != 0 || resize_height % cell != 0) {
    throw ConfigError("HOG resize " + std::to_string(resize_width) + "x" +
                      std::to_string(resize_height) + " not divisible by cell " + std::to_string(cell));
  }
  if (block < 1 || block > cells_x() || block > cells_y()) {
    throw ConfigError("HOG block of " + std::to_string(block) + " cells does not fit " +
                      std::to_string(cells_x()) + "x" + std::to_string(cells_y()) + " cells");
  }
  if (block_stride < 1) throw ConfigError("HOG block stride must be >= 1");
  if (bins < 2) throw ConfigError("HOG needs at least 2 orientation bins");
}

DescriptorVector compute_hog(const Image& image, const HogParams& params) {
  params.validate();
  if (image.empty()) throw DataError("cannot compute HOG of an empty image");

  const GrayPlane plane = resize_gray_bilinear(image, params.resize_width, params.resize_height);
  const int w = plane.width;
  const int h = plane.height;
  const int cx_count = params.cells_x();
  const int bins = params.bins;
  const double bin_width = 180.0 / bins;

  std::vector<double> cells(static_cast<std::size_t>(cx_count) * params.cells_y() * bins, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = plane.at(std::min(x + 1, w - 1), y) - plane.at(std::max(x - 1, 0), y);
      const double gy = plane.at(x, std::min(y + 1, h - 1)) - plane.at(x, std::max(y - 1, 0));
      const double magnitude = std::hypot(gx, gy);
      if (magnitude == 0.0) continue;

      double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;
      const double pos = angle / bin_width;
      const int lo = static_cast<int>(std::floor(pos));
      const double frac = pos - lo;

      double* hist = &cells[(static_cast<std::size_t>(y / params.cell) * cx_count + x / params.cell) * bins];
      hist[lo % bins] += magnitude * (1.0 - frac);
      hist[(lo + 1) % bins] += magnitude * frac;
    }
  }

  const int block = params.block;
  const std::size_t block_len = static_cast<std::size_t>(block) * block * bins;
  std::vector<double> scratch(block_len);
  DescriptorVector out;
  out.values.reserve(params.dimension());
  for (int by = 0; by < params.blocks_y(); ++by) {
    for (int bx = 0; bx < params.blocks_x(); ++bx) {
      std::size_t k = 0;
      for (int cy = 0; cy < block; ++cy) {
        for (int cx = 0; cx < block; ++cx) {
          const int row = by * params.block_stride + cy;
          const int col = bx * params.block_stride + cx;
          const double* hist = &cells[(static_cast<std::size_t>(row) * cx_count + col) * bins];
          for (int b = 0; b < bins; ++b) scratch[k++] = hist[b];
        }
      }
      l2_hys(scratch);
      for (double v : scratch) out.values.push_back(static_cast<float>(v));
    }
  }
  return out;
}

DescriptorSet compute_hog_set(const std::filesystem::path& dir, const std::vector<ImageRecord>& records,
                              const HogParams& params, const std::string& technique, CompressionLevel level,
                              int workers) {
  params.validate();
  DescriptorSet set;
  set.technique = technique;
  set.level = level;
  set.descriptors.resize(records.size());
  parallel_for(records.size(), workers, [&](std::size_t i) {
    set.descriptors[i] = compute_hog(load_image(dir / records[i].filename), params);
  });
  for (const auto& r : records) set.filenames.push_back(r.filename);
  return set;
}

DescriptorVector normalize(const DescriptorVector& v) {
  double sum = 0.0;
  for (float x : v.values) {
    if (!std::isfinite(x)) throw DataError("cannot normalize a descriptor with a non-finite entry");
    sum += static_cast<double>(x) * x;
  }
  const double norm = std::sqrt(sum);
  DescriptorVector out{std::vector<float>(v.dim(), 0.0f)};
  if (norm <= kNormEpsilon) return out;
  for (std::size_t i = 0; i < v.dim(); ++i) out.values[i] = static_cast<float>(v.values[i] / norm);
  return out;
}

}  // namespace jpegvpr
