#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jpegvpr/image.hpp"
#include "jpegvpr/metrics.hpp"

namespace jpegvpr::testing {

/// Directory removed (recursively) on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "jpegvpr");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path fixture_photos_dir();

/// Bundled 264x200 photographs, in filename order.
std::vector<std::filesystem::path> fixture_photo_paths();

/// Writes `dir`/images/ with copies of the photographs and `dir`/manifest.json
/// using the same directory for queries and references (identity truth).
std::filesystem::path make_self_corpus(const std::filesystem::path& dir, int count = 25);

/// Places are 128x96 windows of the photographs (four per photo). References
/// are the windows; queries are the same windows shifted by a few pixels.
/// Writes query/, reference/ and manifest.json (identity truth).
std::filesystem::path make_shift_corpus(const std::filesystem::path& dir, int places = 100);

/// `count` 128x96 RGB images, each a single flat colour.
std::filesystem::path make_flat_corpus(const std::filesystem::path& dir, int count = 20);

/// Gray image, left half `left`, right half `right`.
Image step_edge(int size, std::uint8_t left, std::uint8_t right);

/// Deterministic pseudo-random RGB noise.
Image noise_image(int width, int height, int channels, unsigned seed);

/// HOG descriptors for each level of a `sweep_compress` output directory.
DescriptorsByLevel hog_levels(const std::filesystem::path& sweep_dir, const std::vector<CompressionLevel>& levels,
                              int workers = 1);

std::string read_text(const std::filesystem::path& path);

}  // namespace jpegvpr::testing
