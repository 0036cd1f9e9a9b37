#include "jpegvpr/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>

#include <openssl/evp.h>

#include "jpegvpr/error.hpp"

namespace jpegvpr {
namespace fs = std::filesystem;
using nlohmann::json;

CsvTable sweep_to_csv(const CompressionSweepResult& sweep) {
  CsvTable t{{"dataset", "percent", "image_index", "filename", "bytes"}, {}};
  for (const auto& level : sweep.levels) {
    auto it = sweep.images.find(level.percent());
    if (it == sweep.images.end()) continue;
    for (const auto& img : it->second) {
      t.rows.push_back({sweep.dataset, std::to_string(level.percent()), std::to_string(img.image_index),
                        img.filename, std::to_string(img.bytes)});
    }
  }
  return t;
}

CompressionSweepResult sweep_from_csv(const CsvTable& table) {
  const std::size_t c_dataset = table.column("dataset"), c_percent = table.column("percent"),
                    c_index = table.column("image_index"), c_file = table.column("filename"),
                    c_bytes = table.column("bytes");
  CompressionSweepResult sweep;
  std::set<CompressionLevel> levels;
  for (const auto& row : table.rows) {
    if (sweep.dataset.empty()) sweep.dataset = row[c_dataset];
    const CompressionLevel level(parse_int(row[c_percent], "percent"));
    levels.insert(level);
    ImageSize size;
    size.filename = row[c_file];
    size.set = size.filename.rfind("reference/", 0) == 0 ? "reference" : "query";
    size.image_index = parse_int(row[c_index], "image_index");
    const long long bytes = parse_int64(row[c_bytes], "bytes");
    if (bytes <= 0) throw DataError("non-positive byte count for " + size.filename);
    size.bytes = static_cast<std::uintmax_t>(bytes);
    sweep.images[level.percent()].push_back(std::move(size));
  }
  if (levels.empty()) throw DataError("size report has no rows");
  sweep.levels.assign(levels.begin(), levels.end());
  return sweep;
}

CsvTable matches_to_csv(const std::vector<MatchRecord>& records) {
  CsvTable t{{"query_index", "matched_ref_index", "score"}, {}};
  for (const auto& r : records) {
    t.rows.push_back({std::to_string(r.query_index), std::to_string(r.matched_ref_index), format_fixed(r.score, 9)});
  }
  return t;
}

std::vector<MatchRecord> matches_from_csv(const CsvTable& table) {
  const std::size_t c_q = table.column("query_index"), c_r = table.column("matched_ref_index"),
                    c_s = table.column("score");
  std::vector<MatchRecord> records;
  for (const auto& row : table.rows) {
    records.push_back({parse_int(row[c_q], "query_index"), parse_int(row[c_r], "matched_ref_index"),
                       parse_double(row[c_s], "score"), false});
  }
  return records;
}

ResultRow result_row(const EvaluationResult& r) {
  return {r.technique, r.dataset, r.query_level.percent(), r.ref_level.percent(), r.correct,
          r.reference_count, r.query_count, r.accuracy, r.accuracy_per_query};
}

std::vector<ResultRow> curve_rows(const DegradationCurve& curve) {
  std::vector<ResultRow> rows;
  for (const auto& r : curve.results) rows.push_back(result_row(r));
  return rows;
}

std::vector<ResultRow> grid_rows(const NonUniformGrid& grid) {
  std::vector<ResultRow> rows;
  for (const auto& [key, r] : grid.cells) rows.push_back(result_row(r));
  return rows;
}

CsvTable results_to_csv(const std::vector<ResultRow>& rows) {
  CsvTable t{{"technique", "dataset", "q_level", "r_level", "N_c", "N_r", "N_q", "accuracy", "accuracy_per_query"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.technique, r.dataset, std::to_string(r.q_level), std::to_string(r.r_level),
                      std::to_string(r.correct), std::to_string(r.reference_count), std::to_string(r.query_count),
                      format_fixed(r.accuracy, 9), format_fixed(r.accuracy_per_query, 9)});
  }
  return t;
}

std::vector<ResultRow> results_from_csv(const CsvTable& table) {
  const std::size_t c_t = table.column("technique"), c_d = table.column("dataset"), c_q = table.column("q_level"),
                    c_r = table.column("r_level"), c_nc = table.column("N_c"), c_nr = table.column("N_r"),
                    c_nq = table.column("N_q"), c_a = table.column("accuracy"),
                    c_apq = table.column("accuracy_per_query");
  std::vector<ResultRow> rows;
  for (const auto& row : table.rows) {
    rows.push_back({row[c_t], row[c_d], parse_int(row[c_q], "q_level"), parse_int(row[c_r], "r_level"),
                    parse_int(row[c_nc], "N_c"), parse_int(row[c_nr], "N_r"), parse_int(row[c_nq], "N_q"),
                    parse_double(row[c_a], "accuracy"), parse_double(row[c_apq], "accuracy_per_query")});
  }
  return rows;
}

json results_to_json(const std::vector<ResultRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"technique", r.technique},
                   {"dataset", r.dataset},
                   {"q_level", r.q_level},
                   {"r_level", r.r_level},
                   {"N_c", r.correct},
                   {"N_r", r.reference_count},
                   {"N_q", r.query_count},
                   {"accuracy", r.accuracy},
                   {"accuracy_per_query", r.accuracy_per_query}});
  }
  return out;
}

DegradationCurve curve_from_rows(const std::vector<ResultRow>& rows, const std::string& technique) {
  DegradationCurve curve;
  std::map<int, double> points;
  for (const auto& r : rows) {
    if (r.q_level != r.r_level) continue;
    if (curve.technique.empty() && (technique.empty() || r.technique == technique)) {
      curve.technique = r.technique;
      curve.dataset = r.dataset;
    }
    if (r.technique != curve.technique || r.dataset != curve.dataset) continue;
    points.insert_or_assign(r.q_level, r.accuracy);
  }
  if (points.empty()) throw DataError("no uniform rows found for technique '" + technique + "'");
  for (const auto& [percent, acc] : points) curve.points.push_back({CompressionLevel(percent), acc});
  return curve;
}

CsvTable entropy_summary_to_csv(const std::vector<EntropyReport>& reports) {
  CsvTable t{{"dataset", "percent", "images", "mean_entropy_bits"}, {}};
  for (const auto& r : reports) {
    t.rows.push_back({r.dataset, std::to_string(r.level.percent()), std::to_string(r.entropy_bits.size()),
                      format_fixed(r.mean_bits, 6)});
  }
  return t;
}

CsvTable entropy_images_to_csv(const std::vector<EntropyReport>& reports) {
  CsvTable t{{"dataset", "percent", "image_index", "filename", "entropy_bits"}, {}};
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.entropy_bits.size(); ++i) {
      t.rows.push_back({r.dataset, std::to_string(r.level.percent()), std::to_string(i), r.filenames[i],
                        format_fixed(r.entropy_bits[i], 6)});
    }
  }
  return t;
}

CsvTable pareto_to_csv(const std::vector<ParetoPoint>& points) {
  CsvTable t{{"percent", "bytes", "accuracy", "pareto_optimal"}, {}};
  for (const auto& p : points) {
    t.rows.push_back({std::to_string(p.level.percent()), std::to_string(p.bytes), format_fixed(p.accuracy, 9),
                      p.pareto_optimal ? "true" : "false"});
  }
  return t;
}

json plan_to_json(const TransmissionPlan& plan, const ChannelModel& channel) {
  json out = {{"percent", plan.level.percent()},
              {"encoder_quality", plan.level.encoder_quality()},
              {"total_bytes", plan.total_bytes},
              {"transfer_seconds", plan.transfer_seconds},
              {"frames_per_second", plan.frames_per_second},
              {"rate_bytes_per_second", channel.rate_bytes_per_second},
              {"overhead_fraction", channel.overhead_fraction}};
  out["accuracy"] = plan.accuracy ? json(*plan.accuracy) : json(nullptr);
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialisation failed");
  }
  char buffer[1 << 16];
  while (in) {
    in.read(buffer, sizeof(buffer));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write error on " + path.string());
}

void write_run_metadata(const fs::path& artifact, const std::string& subcommand, const json& params,
                        const std::vector<fs::path>& inputs) {
  json doc;
  doc["tool"] = "jpegvpr";
  doc["tool_version"] = kToolVersion;
  doc["encoder"] = encoder_version();
  doc["subcommand"] = subcommand;
  doc["params"] = params;
  json digests = json::array();
  for (const auto& input : inputs) {
    if (fs::is_regular_file(input)) digests.push_back({{"path", input.generic_string()}, {"sha256", sha256_file(input)}});
  }
  doc["inputs"] = std::move(digests);
  const auto now = std::chrono::system_clock::now();
  doc["created_unix_seconds"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();

  const fs::path path = fs::is_directory(artifact) ? artifact / "run.meta.json"
                                                   : fs::path(artifact.string() + ".meta.json");
  write_text(path, doc.dump(2) + "\n");
}

}  // namespace jpegvpr
