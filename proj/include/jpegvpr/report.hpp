#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jpegvpr/bandwidth.hpp"
#include "jpegvpr/csv.hpp"
#include "jpegvpr/jpeg_codec.hpp"
#include "jpegvpr/metrics.hpp"

namespace jpegvpr {

inline constexpr const char* kToolVersion = "1.0.0";

// sizes.csv: dataset, percent, image_index, filename, bytes
CsvTable sweep_to_csv(const CompressionSweepResult& sweep);
CompressionSweepResult sweep_from_csv(const CsvTable& table);

// matches.csv: query_index, matched_ref_index, score (9 decimals)
CsvTable matches_to_csv(const std::vector<MatchRecord>& records);
std::vector<MatchRecord> matches_from_csv(const CsvTable& table);

/// One long-format results row.
struct ResultRow {
  std::string technique;
  std::string dataset;
  int q_level = 0;
  int r_level = 0;
  int correct = 0;
  int reference_count = 0;
  int query_count = 0;
  double accuracy = 0.0;
  double accuracy_per_query = 0.0;
};

ResultRow result_row(const EvaluationResult& result);
std::vector<ResultRow> curve_rows(const DegradationCurve& curve);
std::vector<ResultRow> grid_rows(const NonUniformGrid& grid);

// technique, dataset, q_level, r_level, N_c, N_r, N_q, accuracy, accuracy_per_query
CsvTable results_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> results_from_csv(const CsvTable& table);
nlohmann::json results_to_json(const std::vector<ResultRow>& rows);

/// Uniform rows (q_level == r_level) of one technique as a curve; an empty
/// technique accepts the first one found.
DegradationCurve curve_from_rows(const std::vector<ResultRow>& rows, const std::string& technique = "");

// entropy.csv: dataset, percent, images, mean_entropy_bits
CsvTable entropy_summary_to_csv(const std::vector<EntropyReport>& reports);
// entropy_images.csv: dataset, percent, image_index, filename, entropy_bits
CsvTable entropy_images_to_csv(const std::vector<EntropyReport>& reports);

// pareto.csv: percent, bytes, accuracy, pareto_optimal
CsvTable pareto_to_csv(const std::vector<ParetoPoint>& points);
nlohmann::json plan_to_json(const TransmissionPlan& plan, const ChannelModel& channel);

/// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

/// Writes the run sidecar next to `artifact`: `<artifact>.meta.json`, or
/// `<artifact>/run.meta.json` for directories. Records tool and encoder
/// versions, the parameters, and a digest of each input file.
void write_run_metadata(const std::filesystem::path& artifact, const std::string& subcommand,
                        const nlohmann::json& params, const std::vector<std::filesystem::path>& inputs);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace jpegvpr
