#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "jpegvpr/dataset.hpp"
#include "jpegvpr/image.hpp"
#include "jpegvpr/jpeg_codec.hpp"

namespace jpegvpr {

/// Fixed-length global image descriptor.
struct DescriptorVector {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  std::span<const float> view() const { return values; }
  bool operator==(const DescriptorVector&) const = default;
};

/// Descriptors of one image set, in dataset index order.
struct DescriptorSet {
  std::string technique;
  CompressionLevel level{0};
  std::vector<DescriptorVector> descriptors;
  std::vector<std::string> filenames;

  std::size_t size() const { return descriptors.size(); }
  std::size_t dim() const { return descriptors.empty() ? 0 : descriptors.front().dim(); }

  /// Non-empty, one filename per descriptor, uniform non-zero dim, finite
  /// values. Throws DataError naming the first violation.
  void validate() const;

  bool operator==(const DescriptorSet&) const = default;
};

/// HOG layout. Unsigned orientations over [0, 180) degrees; bin i is centred
/// on i * 180 / bins.
struct HogParams {
  int resize_width = 128;
  int resize_height = 128;
  int cell = 8;         // pixels per cell side
  int block = 2;        // cells per block side
  int block_stride = 1; // cells
  int bins = 9;

  int cells_x() const { return resize_width / cell; }
  int cells_y() const { return resize_height / cell; }
  int blocks_x() const { return (cells_x() - block) / block_stride + 1; }
  int blocks_y() const { return (cells_y() - block) / block_stride + 1; }
  std::size_t dimension() const;

  /// Throws ConfigError.
  void validate() const;
};

/// Dalal-Triggs style HOG over the whole image: BT.601 luma, bilinear resize,
/// [-1, 0, 1] gradients with edge clamping, magnitude-weighted orientation
/// histograms per cell (linear interpolation between the two nearest bins),
/// L2-Hys per block (clip 0.2). Blocks are emitted row-major, cells within a
/// block row-major, then bins.
DescriptorVector compute_hog(const Image& image, const HogParams& params = {});

/// HOG of every record under `dir`, in record order, computed on up to
/// `workers` threads.
DescriptorSet compute_hog_set(const std::filesystem::path& dir, const std::vector<ImageRecord>& records,
                              const HogParams& params, const std::string& technique, CompressionLevel level,
                              int workers = 1);

/// v / ||v||_2, or the zero vector when ||v||_2 <= 1e-12. Throws DataError on
/// a non-finite entry.
DescriptorVector normalize(const DescriptorVector& v);

inline constexpr double kNormEpsilon = 1e-12;

}  // namespace jpegvpr
