#include "jpegvpr/matcher.hpp"

#include <cmath>

#include "jpegvpr/error.hpp"
#include "jpegvpr/parallel.hpp"

namespace jpegvpr {

double cosine_similarity(std::span<const float> q, std::span<const float> r) {
  if (q.size() != r.size()) {
    throw DataError("descriptor dimension mismatch: " + std::to_string(q.size()) + " vs " +
                    std::to_string(r.size()));
  }
  double dot = 0.0, qq = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double a = q[i];
    const double b = r[i];
    dot += a * b;
    qq += a * a;
    rr += b * b;
  }
  const double qn = std::sqrt(qq);
  const double rn = std::sqrt(rr);
  if (qn < kNormEpsilon || rn < kNormEpsilon) return 0.0;
  return dot / (qn * rn);
}

ScoreList score_list(const DescriptorVector& query, const DescriptorSet& refs, int query_index) {
  if (refs.descriptors.empty()) throw DataError("empty reference set");
  ScoreList list{query_index, {}};
  list.scores.reserve(refs.size());
  for (const auto& ref : refs.descriptors) list.scores.push_back(cosine_similarity(query, ref));
  return list;
}

MatchRecord best_match(const ScoreList& scores) {
  if (scores.scores.empty()) throw DataError("empty score list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.scores.size(); ++i) {
    if (scores.scores[i] > scores.scores[best]) best = i;
  }
  return {scores.query_index, static_cast<int>(best), scores.scores[best], false};
}

SimilarityMatrix similarity_matrix(const DescriptorSet& queries, const DescriptorSet& refs, int workers) {
  if (refs.descriptors.empty()) throw DataError("empty reference set");
  if (!queries.descriptors.empty() && queries.dim() != refs.dim()) {
    throw DataError("descriptor dimension mismatch: queries " + std::to_string(queries.dim()) +
                    ", references " + std::to_string(refs.dim()));
  }
  SimilarityMatrix m{static_cast<int>(queries.size()), static_cast<int>(refs.size()), {}};
  m.values.resize(static_cast<std::size_t>(m.rows) * m.cols);
  parallel_for(queries.size(), workers, [&](std::size_t i) {
    const ScoreList row = score_list(queries.descriptors[i], refs, static_cast<int>(i));
    std::copy(row.scores.begin(), row.scores.end(), m.values.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
  });
  return m;
}

std::vector<MatchRecord> match_all(const DescriptorSet& queries, const DescriptorSet& refs, int workers) {
  const SimilarityMatrix m = similarity_matrix(queries, refs, workers);
  std::vector<MatchRecord> records;
  records.reserve(queries.size());
  for (int i = 0; i < m.rows; ++i) {
    const auto row = m.row(i);
    records.push_back(best_match(ScoreList{i, {row.begin(), row.end()}}));
  }
  return records;
}

DescriptorSet matrix_as_descriptor_set(const SimilarityMatrix& matrix, const DescriptorSet& queries) {
  DescriptorSet set;
  set.technique = "similarity:" + queries.technique;
  set.level = queries.level;
  set.filenames = queries.filenames;
  for (int i = 0; i < matrix.rows; ++i) {
    DescriptorVector v;
    for (double s : matrix.row(i)) v.values.push_back(static_cast<float>(s));
    set.descriptors.push_back(std::move(v));
  }
  return set;
}

}  // namespace jpegvpr
