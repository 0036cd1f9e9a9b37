#include "fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "jpegvpr/jpeg_codec.hpp"

#ifndef JPEGVPR_FIXTURE_DIR
#error "JPEGVPR_FIXTURE_DIR must be defined"
#endif

namespace jpegvpr::testing {
namespace fs = std::filesystem;

TempDir::TempDir(const std::string& prefix) {
  std::string templ = (fs::temp_directory_path() / (prefix + "-XXXXXX")).string();
  if (mkdtemp(templ.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = templ;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path fixture_photos_dir() { return fs::path(JPEGVPR_FIXTURE_DIR) / "photos"; }

std::vector<fs::path> fixture_photo_paths() {
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(fixture_photos_dir())) {
    if (e.path().extension() == ".png") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

namespace {

void write_identity_manifest(const fs::path& path, const std::string& name, const std::string& query_dir,
                             const std::string& reference_dir) {
  std::ofstream out(path);
  out << "{\n  \"name\": \"" << name << "\",\n  \"query_dir\": \"" << query_dir << "\",\n  \"reference_dir\": \""
      << reference_dir << "\",\n  \"frame_tolerance\": 0\n}\n";
}

std::string numbered(const std::string& prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%03d.png", prefix.c_str(), i);
  return buf;
}

}  // namespace

fs::path make_self_corpus(const fs::path& dir, int count) {
  const auto photos = fixture_photo_paths();
  fs::create_directories(dir / "images");
  for (int i = 0; i < count; ++i) {
    fs::copy_file(photos[static_cast<std::size_t>(i) % photos.size()], dir / "images" / numbered("img", i),
                  fs::copy_options::overwrite_existing);
  }
  write_identity_manifest(dir / "manifest.json", "fixture-self", "images", "images");
  return dir / "manifest.json";
}

fs::path make_shift_corpus(const fs::path& dir, int places) {
  const auto photos = fixture_photo_paths();
  fs::create_directories(dir / "query");
  fs::create_directories(dir / "reference");
  constexpr int kW = 128, kH = 96, kMargin = 4;
  std::vector<Image> decoded;
  for (const auto& p : photos) decoded.push_back(load_image(p));

  for (int place = 0; place < places; ++place) {
    const Image& photo = decoded[static_cast<std::size_t>(place / 4) % decoded.size()];
    const int window = place % 4;
    const int rx = kMargin + kW * (window % 2);
    const int ry = kMargin + kH * (window / 2);
    int dx = (place * 7) % 9 - 4;
    int dy = (place * 5 + 2) % 9 - 4;
    if (dx == 0) dx = 3;
    if (dy == 0) dy = -2;
    write_file(dir / "reference" / numbered("r", place), encode_png(crop(photo, rx, ry, kW, kH)));
    write_file(dir / "query" / numbered("q", place), encode_png(crop(photo, rx + dx, ry + dy, kW, kH)));
  }
  write_identity_manifest(dir / "manifest.json", "fixture-shift", "query", "reference");
  return dir / "manifest.json";
}

fs::path make_flat_corpus(const fs::path& dir, int count) {
  fs::create_directories(dir / "images");
  for (int i = 0; i < count; ++i) {
    Image img(128, 96, 3);
    const std::uint8_t rgb[3] = {static_cast<std::uint8_t>((i * 53) % 256), static_cast<std::uint8_t>((i * 97 + 40) % 256),
                                 static_cast<std::uint8_t>((i * 29 + 200) % 256)};
    for (std::size_t p = 0; p < img.pixels.size(); ++p) img.pixels[p] = rgb[p % 3];
    write_file(dir / "images" / numbered("flat", i), encode_png(img));
  }
  write_identity_manifest(dir / "manifest.json", "fixture-flat", "images", "images");
  return dir / "manifest.json";
}

Image step_edge(int size, std::uint8_t left, std::uint8_t right) {
  Image img(size, size, 1);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) img.at(x, y) = x < size / 2 ? left : right;
  }
  return img;
}

Image noise_image(int width, int height, int channels, unsigned seed) {
  Image img(width, height, channels);
  std::minstd_rand rng(seed);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() >> 8);
  return img;
}

DescriptorsByLevel hog_levels(const fs::path& sweep_dir, const std::vector<CompressionLevel>& levels, int workers) {
  DescriptorsByLevel out;
  for (const auto& level : levels) {
    const DatasetManifest m = load_manifest(level_dir(sweep_dir, level) / "manifest.json");
    LevelDescriptors pair;
    pair.queries = compute_hog_set(m.query_dir, m.queries, HogParams{}, "hog", level, workers);
    pair.references = m.self_matched() ? pair.queries
                                       : compute_hog_set(m.reference_dir, m.references, HogParams{}, "hog", level, workers);
    out.emplace(level.percent(), std::move(pair));
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace jpegvpr::testing
