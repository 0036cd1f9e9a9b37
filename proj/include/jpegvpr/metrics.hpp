#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jpegvpr/dataset.hpp"
#include "jpegvpr/descriptor.hpp"
#include "jpegvpr/jpeg_codec.hpp"
#include "jpegvpr/matcher.hpp"

namespace jpegvpr {

/// One (technique, query level, reference level) cell.
struct EvaluationResult {
  std::string technique;
  std::string dataset;
  CompressionLevel query_level{0};
  CompressionLevel ref_level{0};
  int correct = 0;          // N_c
  int reference_count = 0;  // N_r
  int query_count = 0;      // N_q
  /// N_c / N_r. With more references than queries this cannot reach 1.
  double accuracy = 0.0;
  /// N_c / N_q, reported alongside.
  double accuracy_per_query = 0.0;
  std::vector<MatchRecord> records;
};

/// Marks each record correct iff its match lies in accepted_refs of its
/// query's ground truth. N_q is the number of records. Throws DataError if a
/// record's query has no ground truth, ConfigError if reference_count <= 0.
EvaluationResult accuracy(std::vector<MatchRecord> records, std::span<const GroundTruthEntry> ground_truth,
                          int tolerance, int reference_count);

/// Shannon entropy in bits of the 256-bin luma histogram.
double image_entropy(const Image& image);

struct EntropyReport {
  std::string dataset;
  CompressionLevel level{0};
  std::vector<std::string> filenames;
  std::vector<double> entropy_bits;
  double mean_bits = 0.0;
};

/// Mean entropy over the query set of `manifest` (normally a derived manifest
/// of one compressed level). Throws DataError if the corpus is missing.
EntropyReport average_entropy(const DatasetManifest& manifest, CompressionLevel level, int workers = 1);

/// Query and reference descriptors for one compression level.
struct LevelDescriptors {
  DescriptorSet queries;
  DescriptorSet references;
};

using DescriptorsByLevel = std::map<int, LevelDescriptors>;

/// Matches queries at `query_level` against references at `ref_level` and
/// scores against the manifest's ground truth. Every curve point and grid
/// cell goes through here.
EvaluationResult evaluate_cell(const DescriptorsByLevel& descriptors, const DatasetManifest& manifest,
                               const std::string& technique, CompressionLevel query_level,
                               CompressionLevel ref_level, int tolerance, int workers = 1);

struct CurvePoint {
  CompressionLevel level{0};
  double accuracy = 0.0;
};

struct DegradationCurve {
  std::string technique;
  std::string dataset;
  std::vector<CurvePoint> points;        // strictly increasing levels
  std::vector<EvaluationResult> results; // parallel to points
};

/// Uniform protocol: queries and references at the same level.
DegradationCurve degradation_curve(const DescriptorsByLevel& descriptors, const DatasetManifest& manifest,
                                   const std::string& technique, const std::vector<CompressionLevel>& levels,
                                   int tolerance, int workers = 1);

struct NonUniformGrid {
  std::string technique;
  std::string dataset;
  /// (query percent, reference percent) -> result.
  std::map<std::pair<int, int>, EvaluationResult> cells;
};

/// Every (a, b) in q_levels x r_levels.
NonUniformGrid nonuniform_grid(const DescriptorsByLevel& descriptors, const DatasetManifest& manifest,
                               const std::string& technique, const std::vector<CompressionLevel>& q_levels,
                               const std::vector<CompressionLevel>& r_levels, int tolerance, int workers = 1);

}  // namespace jpegvpr
