#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jpegvpr {

/// Query `query_index` is correctly matched by any reference in [ref_lo, ref_hi].
struct GroundTruthEntry {
  int query_index = 0;
  int ref_lo = 0;
  int ref_hi = 0;

  bool operator==(const GroundTruthEntry&) const = default;
};

struct ImageRecord {
  int index = 0;
  std::string filename;
  // Header dimensions; 0 when the header could not be parsed (validate_dataset reports it).
  int width = 0;
  int height = 0;
  std::uintmax_t raw_bytes = 0;

  bool operator==(const ImageRecord&) const = default;
};

/// Inclusive, contiguous range of reference indices.
struct IndexRange {
  int lo = 0;
  int hi = -1;

  bool empty() const { return hi < lo; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(int i) const { return i >= lo && i <= hi; }
  bool operator==(const IndexRange&) const = default;
};

struct DatasetManifest {
  std::string name;
  std::filesystem::path query_dir;
  std::filesystem::path reference_dir;
  int frame_tolerance = 0;
  /// Sorted by query_index, at most one entry per query.
  std::vector<GroundTruthEntry> ground_truth;
  /// True when the manifest had no "ground_truth" and identity pairing was used.
  bool identity_ground_truth = true;
  std::vector<ImageRecord> queries;
  std::vector<ImageRecord> references;

  int query_count() const { return static_cast<int>(queries.size()); }
  int reference_count() const { return static_cast<int>(references.size()); }
  bool self_matched() const;
  const GroundTruthEntry* find_ground_truth(int query_index) const;
};

/// Lists PNG/JPEG files of `dir` in byte-wise lexicographic filename order.
std::vector<ImageRecord> enumerate_images(const std::filesystem::path& dir);

/// Reads a JSON manifest; relative directories resolve against the manifest's
/// own directory. Throws DataError with file (and line, for syntax errors) context.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Parses manifest text. `origin` is used in error messages only.
DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir,
                               std::string_view origin = "<manifest>");

/// Writes `manifest` as JSON, with directories relative to the file's location
/// when possible. Ground truth is written out only when it is explicit.
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// [max(0, lo - tolerance), hi + tolerance] clamped to [0, reference_count).
IndexRange accepted_refs(const GroundTruthEntry& gt, int tolerance, int reference_count);

struct ValidationIssue {
  enum class Severity { kWarning, kError };
  Severity severity = Severity::kError;
  std::string file;  // empty for dataset-level issues
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool empty() const { return issues.empty(); }
  /// No error-severity issues. Warnings (mixed dimensions, coverage gaps) are allowed.
  bool usable() const;
};

/// Decodes every image and checks ground-truth coverage. Never throws on bad
/// data; problems become report entries.
ValidationReport validate_dataset(const DatasetManifest& manifest);

}  // namespace jpegvpr
