#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jpegvpr/dataset.hpp"
#include "jpegvpr/image.hpp"

namespace jpegvpr {

using Bytes = std::vector<std::uint8_t>;

/// JPEG compression percentage in [0, 99]. Encoder quality is 100 - percent,
/// so 97% compression means libjpeg quality 3.
class CompressionLevel {
 public:
  static constexpr int kSubsamplingThreshold = 90;

  /// Throws ConfigError outside [0, 99].
  explicit CompressionLevel(int percent);

  int percent() const { return percent_; }
  int encoder_quality() const { return 100 - percent_; }
  /// 4:2:0 chroma subsampling at percent >= 90, 4:4:4 below.
  bool chroma_subsampled() const { return percent_ >= kSubsamplingThreshold; }

  auto operator<=>(const CompressionLevel&) const = default;

 private:
  int percent_;
};

/// {0, 50, 80, 90, 95, 97}.
std::vector<CompressionLevel> default_levels();

/// Parses "0,50,97" into a sorted, de-duplicated list. Throws ConfigError.
std::vector<CompressionLevel> parse_levels(std::string_view text);

/// Name and version of the linked JPEG encoder, e.g. "libjpeg-turbo 2.1.2".
std::string encoder_version();

/// Baseline sequential JPEG (Huffman, 8-bit, ISLOW DCT). Gray input encodes a
/// single luma component. Throws ConfigError on an empty image, DataError on
/// encoder failure.
Bytes compress_image(const Image& image, CompressionLevel level);

/// Decodes JPEG or PNG (sniffed by signature) to 8-bit gray or RGB. PNG alpha
/// is composited away. Corrupt or truncated streams throw DataError.
Image decode_image(std::span<const std::uint8_t> bytes);

/// Lossless PNG encoding, used for fixtures and synthetic corpora.
Bytes encode_png(const Image& image);

struct ImageDimensions {
  int width = 0;
  int height = 0;
};

/// Header-only probe. Throws DataError when the header is unreadable.
ImageDimensions probe_dimensions(std::span<const std::uint8_t> bytes);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
Image load_image(const std::filesystem::path& path);

struct ImageSize {
  std::string set;  // "query" or "reference"
  int image_index = 0;
  /// Path relative to the level directory, e.g. "query/0001.jpg".
  std::string filename;
  std::uintmax_t bytes = 0;
};

struct EncodeFailure {
  int percent = 0;
  std::string file;
  std::string message;
};

struct CompressionSweepResult {
  std::string dataset;
  std::vector<CompressionLevel> levels;
  /// percent -> per-image sizes, queries first, each set in index order.
  std::map<int, std::vector<ImageSize>> images;
  std::vector<EncodeFailure> failures;

  std::uintmax_t total_bytes(int percent) const;
  double mean_bytes(int percent) const;
};

struct SweepOptions {
  int workers = 1;
};

/// Writes out_dir/<percent>/{query,reference}/<stem>.jpg plus a derived
/// out_dir/<percent>/manifest.json for every level. When the query and
/// reference directories coincide only the query set is encoded and the derived
/// manifest points both sides at it. Per-image failures are collected in the
/// result; an unwritable out_dir throws DataError.
CompressionSweepResult sweep_compress(const DatasetManifest& manifest,
                                      const std::vector<CompressionLevel>& levels,
                                      const std::filesystem::path& out_dir,
                                      const SweepOptions& options = {});

/// Directory holding the derived corpus for one level.
std::filesystem::path level_dir(const std::filesystem::path& out_dir, CompressionLevel level);

}  // namespace jpegvpr
