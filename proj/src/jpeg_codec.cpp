#include "jpegvpr/jpeg_codec.hpp"

#include <algorithm>
#include <charconv>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>

#include <jpeglib.h>
#include <png.h>

#include "jpegvpr/error.hpp"
#include "jpegvpr/parallel.hpp"

namespace jpegvpr {
namespace fs = std::filesystem;

namespace {

#define JPEGVPR_STR2(x) #x
#define JPEGVPR_STR(x) JPEGVPR_STR2(x)

struct ErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX] = {};
  char warning[JMSG_LENGTH_MAX] = {};
};

[[noreturn]] void on_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<ErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Warnings (premature EOF, extraneous bytes) are counted and kept, never printed.
void on_emit_message(j_common_ptr cinfo, int level) {
  if (level >= 0) return;
  auto* err = reinterpret_cast<ErrorManager*>(cinfo->err);
  if (cinfo->err->num_warnings == 0) (*cinfo->err->format_message)(cinfo, err->warning);
  cinfo->err->num_warnings++;
}

jpeg_error_mgr* install(ErrorManager& err) {
  jpeg_error_mgr* pub = jpeg_std_error(&err.pub);
  pub->error_exit = on_error_exit;
  pub->emit_message = on_emit_message;
  return pub;
}

bool is_png(std::span<const std::uint8_t> b) {
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return b.size() >= 8 && std::equal(kSig, kSig + 8, b.begin());
}

bool is_jpeg(std::span<const std::uint8_t> b) {
  return b.size() >= 2 && b[0] == 0xFF && b[1] == 0xD8;
}

Image decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo;
  ErrorManager err;
  cinfo.err = install(err);
  auto out = std::make_unique<Image>();

  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw DataError(std::string("corrupt JPEG stream: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);
  *out = Image(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height),
               cinfo.output_components);
  const std::size_t stride = static_cast<std::size_t>(out->width) * out->channels;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = &out->pixels[cinfo.output_scanline * stride];
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  const long warnings = err.pub.num_warnings;
  jpeg_destroy_decompress(&cinfo);
  if (warnings > 0) throw DataError(std::string("corrupt JPEG stream: ") + err.warning);
  return std::move(*out);
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw DataError(std::string("corrupt PNG stream: ") + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image out(static_cast<int>(png.width), static_cast<int>(png.height), color ? 3 : 1);
  if (!png_image_finish_read(&png, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string message = png.message;
    png_image_free(&png);
    throw DataError("corrupt PNG stream: " + message);
  }
  return out;
}

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

}  // namespace

CompressionLevel::CompressionLevel(int percent) : percent_(percent) {
  if (percent < 0 || percent > 99) {
    throw ConfigError("compression percent " + std::to_string(percent) + " outside [0, 99]");
  }
}

std::vector<CompressionLevel> default_levels() {
  return {CompressionLevel(0),  CompressionLevel(50), CompressionLevel(80),
          CompressionLevel(90), CompressionLevel(95), CompressionLevel(97)};
}

std::vector<CompressionLevel> parse_levels(std::string_view text) {
  std::set<CompressionLevel> levels;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("bad compression level '" + std::string(item) + "' in '" +
                        std::string(text) + "'");
    }
    levels.insert(CompressionLevel(value));
    start = end + 1;
  }
  return {levels.begin(), levels.end()};
}

std::string encoder_version() {
  return "libjpeg-turbo " JPEGVPR_STR(LIBJPEG_TURBO_VERSION);
}

Bytes compress_image(const Image& image, CompressionLevel level) {
  if (image.empty()) throw ConfigError("cannot compress an empty image");
  if (image.channels != 1 && image.channels != 3) {
    throw ConfigError("unsupported channel count " + std::to_string(image.channels));
  }

  jpeg_compress_struct cinfo;
  ErrorManager err;
  cinfo.err = install(err);
  unsigned char* buffer = nullptr;
  unsigned long size = 0;

  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    throw DataError(std::string("JPEG encoder failure: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = static_cast<JDIMENSION>(image.width);
  cinfo.image_height = static_cast<JDIMENSION>(image.height);
  cinfo.input_components = image.channels;
  cinfo.in_color_space = image.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.optimize_coding = FALSE;
  jpeg_set_quality(&cinfo, level.encoder_quality(), TRUE);
  if (image.channels == 3) {
    const int luma_factor = level.chroma_subsampled() ? 2 : 1;
    cinfo.comp_info[0].h_samp_factor = luma_factor;
    cinfo.comp_info[0].v_samp_factor = luma_factor;
    for (int c = 1; c < 3; ++c) {
      cinfo.comp_info[c].h_samp_factor = 1;
      cinfo.comp_info[c].v_samp_factor = 1;
    }
  }
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
  while (cinfo.next_scanline < cinfo.image_height) {
    auto row = const_cast<JSAMPROW>(&image.pixels[cinfo.next_scanline * stride]);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  Bytes out(buffer, buffer + size);
  jpeg_destroy_compress(&cinfo);
  std::free(buffer);
  return out;
}

Image decode_image(std::span<const std::uint8_t> bytes) {
  if (is_jpeg(bytes)) return decode_jpeg(bytes);
  if (is_png(bytes)) return decode_png(bytes);
  throw DataError("unrecognized image stream (neither JPEG nor PNG)");
}

Bytes encode_png(const Image& image) {
  if (image.empty() || (image.channels != 1 && image.channels != 3)) {
    throw ConfigError("cannot PNG-encode image with " + std::to_string(image.channels) +
                      " channels");
  }
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
    throw DataError(std::string("PNG encoder failure: ") + png.message);
  }
  Bytes out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
    throw DataError(std::string("PNG encoder failure: ") + png.message);
  }
  out.resize(size);
  return out;
}

ImageDimensions probe_dimensions(std::span<const std::uint8_t> bytes) {
  if (is_png(bytes)) {
    // IHDR is always the first chunk: length(4) type(4) width(4) height(4).
    if (bytes.size() < 24 || !std::equal(bytes.begin() + 12, bytes.begin() + 16, "IHDR")) {
      throw DataError("truncated PNG header");
    }
    return {static_cast<int>(read_be32(bytes, 16)), static_cast<int>(read_be32(bytes, 20))};
  }
  if (is_jpeg(bytes)) {
    jpeg_decompress_struct cinfo;
    ErrorManager err;
    cinfo.err = install(err);
    if (setjmp(err.jump)) {
      jpeg_destroy_decompress(&cinfo);
      throw DataError(std::string("corrupt JPEG header: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    ImageDimensions dims{static_cast<int>(cinfo.image_width), static_cast<int>(cinfo.image_height)};
    jpeg_destroy_decompress(&cinfo);
    return dims;
  }
  throw DataError("unrecognized image stream (neither JPEG nor PNG)");
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError("read error on " + path.string());
  return data;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write error on " + path.string());
}

Image load_image(const fs::path& path) {
  try {
    return decode_image(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::uintmax_t CompressionSweepResult::total_bytes(int percent) const {
  std::uintmax_t total = 0;
  if (auto it = images.find(percent); it != images.end()) {
    for (const auto& entry : it->second) total += entry.bytes;
  }
  return total;
}

double CompressionSweepResult::mean_bytes(int percent) const {
  auto it = images.find(percent);
  if (it == images.end() || it->second.empty()) return 0.0;
  return static_cast<double>(total_bytes(percent)) / static_cast<double>(it->second.size());
}

fs::path level_dir(const fs::path& out_dir, CompressionLevel level) {
  return out_dir / std::to_string(level.percent());
}

namespace {

struct SweepJob {
  std::string set;
  int index = 0;
  fs::path source;
  std::string output_name;
};

std::vector<SweepJob> plan_set(const std::string& set, const fs::path& dir,
                               const std::vector<ImageRecord>& records) {
  std::vector<SweepJob> jobs;
  for (const auto& record : records) {
    jobs.push_back({set, record.index, dir / record.filename,
                    fs::path(record.filename).stem().string() + ".jpg"});
  }
  // Derived corpora are re-enumerated by filename, so the renamed files must
  // keep both uniqueness and the original order.
  for (std::size_t i = 1; i < jobs.size(); ++i) {
    if (!(jobs[i - 1].output_name < jobs[i].output_name)) {
      throw DataError(dir.string() + ": renaming '" + records[i - 1].filename + "' and '" +
                      records[i].filename + "' to .jpg collides or reorders the " + set +
                      " set");
    }
  }
  return jobs;
}

}  // namespace

CompressionSweepResult sweep_compress(const DatasetManifest& manifest,
                                      const std::vector<CompressionLevel>& levels,
                                      const fs::path& out_dir, const SweepOptions& options) {
  if (levels.empty()) throw ConfigError("no compression levels given");

  std::vector<SweepJob> jobs = plan_set("query", manifest.query_dir, manifest.queries);
  const bool shared = manifest.self_matched();
  if (!shared) {
    auto refs = plan_set("reference", manifest.reference_dir, manifest.references);
    jobs.insert(jobs.end(), refs.begin(), refs.end());
  }

  std::error_code ec;
  for (const auto& level : levels) {
    fs::create_directories(level_dir(out_dir, level) / "query", ec);
    if (!ec && !shared) fs::create_directories(level_dir(out_dir, level) / "reference", ec);
    if (ec) throw DataError("cannot create output directory under " + out_dir.string() + ": " + ec.message());
  }

  // sizes[job][level]; 0 marks a failure.
  std::vector<std::vector<std::uintmax_t>> sizes(jobs.size(), std::vector<std::uintmax_t>(levels.size(), 0));
  std::vector<std::vector<std::string>> errors(jobs.size(), std::vector<std::string>(levels.size()));

  parallel_for(jobs.size(), options.workers, [&](std::size_t j) {
    const SweepJob& job = jobs[j];
    Image image;
    try {
      image = load_image(job.source);
    } catch (const DataError& e) {
      std::fill(errors[j].begin(), errors[j].end(), e.what());
      return;
    }
    for (std::size_t l = 0; l < levels.size(); ++l) {
      try {
        const Bytes encoded = compress_image(image, levels[l]);
        write_file(level_dir(out_dir, levels[l]) / job.set / job.output_name, encoded);
        sizes[j][l] = encoded.size();
      } catch (const std::exception& e) {
        errors[j][l] = e.what();
      }
    }
  });

  CompressionSweepResult result;
  result.dataset = manifest.name;
  result.levels = levels;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    auto& entries = result.images[levels[l].percent()];
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (!errors[j][l].empty()) {
        result.failures.push_back({levels[l].percent(), jobs[j].source.string(), errors[j][l]});
        continue;
      }
      entries.push_back({jobs[j].set, jobs[j].index, jobs[j].set + "/" + jobs[j].output_name, sizes[j][l]});
    }

    DatasetManifest derived = manifest;
    derived.query_dir = level_dir(out_dir, levels[l]) / "query";
    derived.reference_dir = level_dir(out_dir, levels[l]) / (shared ? "query" : "reference");
    write_manifest(derived, level_dir(out_dir, levels[l]) / "manifest.json");
  }
  return result;
}

}  // namespace jpegvpr
