#pragma once

// VPRD descriptor interchange format, all integers little-endian:
//
//   "VPRD"            4 bytes magic 0x56 0x50 0x52 0x44
//   u16 version       = 1
//   u16 reserved      = 0
//   u32 count
//   u32 dim
//   u16 label_len, label bytes (UTF-8 technique label)
//   count * dim IEEE-754 float32, row-major
//   count * (u16 len, UTF-8 filename)
//
// Any deviation, including trailing bytes, is a load error.

#include <cstdint>
#include <filesystem>
#include <span>

#include "jpegvpr/descriptor.hpp"

namespace jpegvpr {

inline constexpr std::uint16_t kVprdVersion = 1;

/// Serializes a validated set. Throws DataError("empty set") for no descriptors.
Bytes encode_vprd(const DescriptorSet& set);

/// Parses and validates. The returned set's level is 0; the format does not
/// carry it. Throws DataError: "not a VPRD file", "unsupported VPRD version",
/// "truncated VPRD", "non-finite value", "malformed VPRD".
DescriptorSet decode_vprd(std::span<const std::uint8_t> bytes);

/// Returns the number of bytes written.
std::size_t write_descriptor_file(const DescriptorSet& set, const std::filesystem::path& path);
DescriptorSet load_descriptor_file(const std::filesystem::path& path);

}  // namespace jpegvpr
