#pragma once

#include <span>
#include <vector>

#include "jpegvpr/descriptor.hpp"

namespace jpegvpr {

/// (q . r) / (|q| |r|), accumulated in double from float32 entries. Returns 0
/// when either norm is below 1e-12. Throws DataError on a dimension mismatch.
double cosine_similarity(std::span<const float> q, std::span<const float> r);

inline double cosine_similarity(const DescriptorVector& q, const DescriptorVector& r) {
  return cosine_similarity(q.view(), r.view());
}

/// Similarities of one query against every reference, in reference order.
struct ScoreList {
  int query_index = 0;
  std::vector<double> scores;
};

struct MatchRecord {
  int query_index = 0;
  int matched_ref_index = 0;
  double score = 0.0;
  /// Set by metrics::accuracy.
  bool correct = false;

  bool operator==(const MatchRecord&) const = default;
};

ScoreList score_list(const DescriptorVector& query, const DescriptorSet& refs, int query_index = 0);

/// Argmax of the list; ties go to the lowest reference index. Throws DataError
/// on an empty list.
MatchRecord best_match(const ScoreList& scores);

struct SimilarityMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  std::span<const double> row(int r) const {
    return std::span<const double>(values).subspan(static_cast<std::size_t>(r) * cols, cols);
  }
};

/// Rows are computed in parallel; each row is exactly score_list(queries[i], refs).
SimilarityMatrix similarity_matrix(const DescriptorSet& queries, const DescriptorSet& refs,
                                   int workers = 1);

/// best_match for every query, in query order.
std::vector<MatchRecord> match_all(const DescriptorSet& queries, const DescriptorSet& refs,
                                   int workers = 1);

/// Matrix as a VPRD-layout set (count = queries, dim = references) for
/// inspection with the descriptor tooling.
DescriptorSet matrix_as_descriptor_set(const SimilarityMatrix& matrix, const DescriptorSet& queries);

}  // namespace jpegvpr
