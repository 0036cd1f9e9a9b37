#include "jpegvpr/metrics.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "jpegvpr/error.hpp"
#include "jpegvpr/parallel.hpp"

namespace jpegvpr {

EvaluationResult accuracy(std::vector<MatchRecord> records, std::span<const GroundTruthEntry> ground_truth,
                          int tolerance, int reference_count) {
  if (reference_count <= 0) throw ConfigError("reference count must be positive");
  if (tolerance < 0) throw ConfigError("tolerance must be >= 0");

  std::map<int, GroundTruthEntry> by_query;
  for (const auto& e : ground_truth) by_query.emplace(e.query_index, e);

  EvaluationResult result;
  for (auto& record : records) {
    auto it = by_query.find(record.query_index);
    if (it == by_query.end()) {
      throw DataError("query " + std::to_string(record.query_index) + " has no ground truth entry");
    }
    record.correct = accepted_refs(it->second, tolerance, reference_count).contains(record.matched_ref_index);
    result.correct += record.correct ? 1 : 0;
  }
  result.reference_count = reference_count;
  result.query_count = static_cast<int>(records.size());
  result.accuracy = static_cast<double>(result.correct) / reference_count;
  result.accuracy_per_query =
      records.empty() ? 0.0 : static_cast<double>(result.correct) / static_cast<double>(records.size());
  result.records = std::move(records);
  return result;
}

double image_entropy(const Image& image) {
  const Image gray = to_gray(image);
  if (gray.pixels.empty()) return 0.0;
  std::array<std::size_t, 256> histogram{};
  for (std::uint8_t v : gray.pixels) ++histogram[v];
  const double n = static_cast<double>(gray.pixels.size());
  double bits = 0.0;
  for (std::size_t count : histogram) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / n;
    bits -= p * std::log2(p);
  }
  return bits;
}

EntropyReport average_entropy(const DatasetManifest& manifest, CompressionLevel level, int workers) {
  EntropyReport report;
  report.dataset = manifest.name;
  report.level = level;
  report.entropy_bits.resize(manifest.queries.size());
  parallel_for(manifest.queries.size(), workers, [&](std::size_t i) {
    report.entropy_bits[i] = image_entropy(load_image(manifest.query_dir / manifest.queries[i].filename));
  });
  for (const auto& q : manifest.queries) report.filenames.push_back(q.filename);
  if (!report.entropy_bits.empty()) {
    report.mean_bits = std::accumulate(report.entropy_bits.begin(), report.entropy_bits.end(), 0.0) /
                       static_cast<double>(report.entropy_bits.size());
  }
  return report;
}

namespace {

const LevelDescriptors& at_level(const DescriptorsByLevel& descriptors, CompressionLevel level) {
  auto it = descriptors.find(level.percent());
  if (it == descriptors.end()) {
    throw DataError("missing descriptor set for level " + std::to_string(level.percent()) + "%");
  }
  return it->second;
}

}  // namespace

EvaluationResult evaluate_cell(const DescriptorsByLevel& descriptors, const DatasetManifest& manifest,
                               const std::string& technique, CompressionLevel query_level,
                               CompressionLevel ref_level, int tolerance, int workers) {
  const DescriptorSet& queries = at_level(descriptors, query_level).queries;
  const DescriptorSet& refs = at_level(descriptors, ref_level).references;
  if (static_cast<int>(queries.size()) != manifest.query_count()) {
    throw DataError("query descriptors at " + std::to_string(query_level.percent()) + "% hold " +
                    std::to_string(queries.size()) + " entries, dataset has " +
                    std::to_string(manifest.query_count()) + " queries");
  }
  if (static_cast<int>(refs.size()) != manifest.reference_count()) {
    throw DataError("reference descriptors at " + std::to_string(ref_level.percent()) + "% hold " +
                    std::to_string(refs.size()) + " entries, dataset has " +
                    std::to_string(manifest.reference_count()) + " references");
  }
  EvaluationResult result =
      accuracy(match_all(queries, refs, workers), manifest.ground_truth, tolerance, manifest.reference_count());
  result.technique = technique;
  result.dataset = manifest.name;
  result.query_level = query_level;
  result.ref_level = ref_level;
  return result;
}

DegradationCurve degradation_curve(const DescriptorsByLevel& descriptors, const DatasetManifest& manifest,
                                   const std::string& technique, const std::vector<CompressionLevel>& levels,
                                   int tolerance, int workers) {
  const std::set<CompressionLevel> sorted(levels.begin(), levels.end());
  DegradationCurve curve{technique, manifest.name, {}, {}};
  for (const auto& level : sorted) {
    curve.results.push_back(evaluate_cell(descriptors, manifest, technique, level, level, tolerance, workers));
    curve.points.push_back({level, curve.results.back().accuracy});
  }
  return curve;
}

NonUniformGrid nonuniform_grid(const DescriptorsByLevel& descriptors, const DatasetManifest& manifest,
                               const std::string& technique, const std::vector<CompressionLevel>& q_levels,
                               const std::vector<CompressionLevel>& r_levels, int tolerance, int workers) {
  NonUniformGrid grid{technique, manifest.name, {}};
  for (const auto& a : q_levels) {
    for (const auto& b : r_levels) {
      grid.cells.insert_or_assign({a.percent(), b.percent()},
                                  evaluate_cell(descriptors, manifest, technique, a, b, tolerance, workers));
    }
  }
  return grid;
}

}  // namespace jpegvpr
