#include "jpegvpr/vprd.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string_view>

#include "jpegvpr/error.hpp"

namespace jpegvpr {

namespace {

constexpr std::uint8_t kMagic[4] = {0x56, 0x50, 0x52, 0x44};

class Writer {
 public:
  void u16(std::uint16_t v) { bytes(v, 2); }
  void u32(std::uint32_t v) { bytes(v, 4); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void str(std::string_view s) {
    if (s.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw DataError("string too long for VPRD: " + std::string(s.substr(0, 32)) + "...");
    }
    u16(static_cast<std::uint16_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void raw(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  Bytes take() { return std::move(out_); }

 private:
  void bytes(std::uint32_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string str() {
    const std::uint16_t len = u16();
    need(len);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw DataError("truncated VPRD");
  }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{b_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1, cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2, cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3, cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (int k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

}  // namespace

Bytes encode_vprd(const DescriptorSet& set) {
  set.validate();
  if (set.size() > std::numeric_limits<std::uint32_t>::max() ||
      set.dim() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("descriptor set too large for VPRD");
  }
  Writer w;
  w.raw(kMagic);
  w.u16(kVprdVersion);
  w.u16(0);
  w.u32(static_cast<std::uint32_t>(set.size()));
  w.u32(static_cast<std::uint32_t>(set.dim()));
  w.str(set.technique);
  for (const auto& d : set.descriptors) {
    for (float v : d.values) w.f32(v);
  }
  for (const auto& name : set.filenames) w.str(name);
  return w.take();
}

DescriptorSet decode_vprd(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw DataError("not a VPRD file");
  }
  Reader r(bytes.subspan(4));
  const std::uint16_t version = r.u16();
  if (version != kVprdVersion) {
    throw DataError("unsupported VPRD version " + std::to_string(version));
  }
  if (r.u16() != 0) throw DataError("malformed VPRD: reserved field is not zero");
  const std::uint32_t count = r.u32();
  const std::uint32_t dim = r.u32();
  if (count == 0) throw DataError("malformed VPRD: empty set");
  if (dim == 0) throw DataError("malformed VPRD: zero dimension");

  DescriptorSet set;
  set.technique = r.str();
  if (!valid_utf8(set.technique)) throw DataError("malformed VPRD: label is not UTF-8");

  r.need(static_cast<std::size_t>(count) * dim * 4);
  set.descriptors.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    auto& values = set.descriptors[i].values;
    values.resize(dim);
    for (std::uint32_t k = 0; k < dim; ++k) {
      values[k] = r.f32();
      if (!std::isfinite(values[k])) {
        throw DataError("non-finite value in VPRD at descriptor " + std::to_string(i));
      }
    }
  }
  set.filenames.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    set.filenames.push_back(r.str());
    if (!valid_utf8(set.filenames.back())) {
      throw DataError("malformed VPRD: filename " + std::to_string(i) + " is not UTF-8");
    }
  }
  if (r.remaining() != 0) {
    throw DataError("malformed VPRD: " + std::to_string(r.remaining()) + " trailing bytes");
  }
  return set;
}

std::size_t write_descriptor_file(const DescriptorSet& set, const std::filesystem::path& path) {
  const Bytes bytes = encode_vprd(set);
  write_file(path, bytes);
  return bytes.size();
}

DescriptorSet load_descriptor_file(const std::filesystem::path& path) {
  try {
    return decode_vprd(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace jpegvpr
