#include "jpegvpr/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jpegvpr/error.hpp"
#include "jpegvpr/jpeg_codec.hpp"

namespace jpegvpr {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

int as_index(const json& value, const std::string& where) {
  if (!value.is_number_integer()) throw DataError(where + ": expected an integer");
  return value.get<int>();
}

}  // namespace

bool DatasetManifest::self_matched() const {
  std::error_code ec;
  return fs::equivalent(query_dir, reference_dir, ec) ||
         query_dir.lexically_normal() == reference_dir.lexically_normal();
}

const GroundTruthEntry* DatasetManifest::find_ground_truth(int query_index) const {
  auto it = std::lower_bound(ground_truth.begin(), ground_truth.end(), query_index,
                             [](const GroundTruthEntry& e, int q) { return e.query_index < q; });
  return it != ground_truth.end() && it->query_index == query_index ? &*it : nullptr;
}

std::vector<ImageRecord> enumerate_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DataError("missing image directory " + dir.string());

  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && has_image_extension(entry.path())) {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());

  std::vector<ImageRecord> records;
  records.reserve(names.size());
  for (const auto& name : names) {
    ImageRecord record;
    record.index = static_cast<int>(records.size());
    record.filename = name;
    record.raw_bytes = fs::file_size(dir / name);
    try {
      const Bytes bytes = read_file(dir / name);
      const ImageDimensions dims = probe_dimensions(bytes);
      record.width = dims.width;
      record.height = dims.height;
    } catch (const DataError&) {
      // Left at 0x0 for validate_dataset to report.
    }
    records.push_back(std::move(record));
  }
  return records;
}

DatasetManifest parse_manifest(std::string_view text, const fs::path& base_dir,
                               std::string_view origin) {
  const std::string where(origin);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(where + ":" + std::to_string(line_of(text, e.byte)) + ": unparsable manifest: " +
                    e.what());
  }
  if (!doc.is_object()) throw DataError(where + ": manifest must be a JSON object");

  DatasetManifest m;
  try {
    m.name = doc.at("name").get<std::string>();
    m.query_dir = base_dir / doc.at("query_dir").get<std::string>();
    m.reference_dir = base_dir / doc.at("reference_dir").get<std::string>();
    m.frame_tolerance = doc.value("frame_tolerance", 0);
  } catch (const json::exception& e) {
    throw DataError(where + ": " + e.what());
  }
  if (m.frame_tolerance < 0) throw DataError(where + ": frame_tolerance must be >= 0");

  m.queries = enumerate_images(m.query_dir);
  m.references = enumerate_images(m.reference_dir);
  if (m.queries.empty()) throw DataError(where + ": no images in " + m.query_dir.string());
  if (m.references.empty()) throw DataError(where + ": no images in " + m.reference_dir.string());

  if (!doc.contains("ground_truth")) {
    m.identity_ground_truth = true;
    const int n = std::min(m.query_count(), m.reference_count());
    for (int i = 0; i < n; ++i) m.ground_truth.push_back({i, i, i});
    return m;
  }

  m.identity_ground_truth = false;
  const json& gt = doc.at("ground_truth");
  if (!gt.is_array()) throw DataError(where + ": ground_truth must be an array");
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const std::string at = where + ": ground_truth[" + std::to_string(i) + "]";
    if (!gt[i].is_array() || gt[i].size() != 3) throw DataError(at + ": expected [query, lo, hi]");
    GroundTruthEntry e{as_index(gt[i][0], at), as_index(gt[i][1], at), as_index(gt[i][2], at)};
    if (e.query_index < 0 || e.query_index >= m.query_count()) {
      throw DataError(at + ": query index " + std::to_string(e.query_index) + " out of range (" +
                      std::to_string(m.query_count()) + " queries)");
    }
    if (e.ref_lo > e.ref_hi) {
      throw DataError(at + ": empty range [" + std::to_string(e.ref_lo) + ", " +
                      std::to_string(e.ref_hi) + "]");
    }
    if (e.ref_lo < 0 || e.ref_hi >= m.reference_count()) {
      throw DataError(at + ": reference range [" + std::to_string(e.ref_lo) + ", " +
                      std::to_string(e.ref_hi) + "] out of range (" +
                      std::to_string(m.reference_count()) + " references)");
    }
    m.ground_truth.push_back(e);
  }
  std::sort(m.ground_truth.begin(), m.ground_truth.end(),
            [](const auto& a, const auto& b) { return a.query_index < b.query_index; });
  for (std::size_t i = 1; i < m.ground_truth.size(); ++i) {
    if (m.ground_truth[i].query_index == m.ground_truth[i - 1].query_index) {
      throw DataError(where + ": duplicate ground truth for query " +
                      std::to_string(m.ground_truth[i].query_index));
    }
  }
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path.parent_path(), path.string());
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  auto relative = [&](const fs::path& dir) {
    const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    std::error_code ec;
    fs::path rel = fs::relative(dir, base, ec);
    return (ec || rel.empty() ? fs::absolute(dir) : rel).generic_string();
  };

  json doc = json::object();
  doc["name"] = manifest.name;
  doc["query_dir"] = relative(manifest.query_dir);
  doc["reference_dir"] = relative(manifest.reference_dir);
  doc["frame_tolerance"] = manifest.frame_tolerance;
  if (!manifest.identity_ground_truth) {
    json gt = json::array();
    for (const auto& e : manifest.ground_truth) gt.push_back({e.query_index, e.ref_lo, e.ref_hi});
    doc["ground_truth"] = std::move(gt);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write manifest " + path.string());
  out << doc.dump(2) << '\n';
}

IndexRange accepted_refs(const GroundTruthEntry& gt, int tolerance, int reference_count) {
  return {std::max(0, gt.ref_lo - tolerance), std::min(reference_count - 1, gt.ref_hi + tolerance)};
}

bool ValidationReport::usable() const {
  return std::none_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
    return i.severity == ValidationIssue::Severity::kError;
  });
}

ValidationReport validate_dataset(const DatasetManifest& manifest) {
  using Severity = ValidationIssue::Severity;
  ValidationReport report;

  auto check_set = [&](const fs::path& dir, const std::vector<ImageRecord>& records) {
    std::map<std::pair<int, int>, int> dims;
    for (const auto& record : records) {
      const fs::path file = dir / record.filename;
      try {
        const Image image = load_image(file);
        ++dims[{image.width, image.height}];
      } catch (const DataError& e) {
        report.issues.push_back({Severity::kError, file.string(), std::string("undecodable: ") + e.what()});
      }
    }
    if (dims.size() > 1) {
      std::string summary;
      for (const auto& [wh, count] : dims) {
        summary += (summary.empty() ? "" : ", ") + std::to_string(wh.first) + "x" +
                   std::to_string(wh.second) + " (" + std::to_string(count) + ")";
      }
      report.issues.push_back({Severity::kWarning, dir.string(), "dimension mismatch: " + summary});
    }
  };

  check_set(manifest.query_dir, manifest.queries);
  if (!manifest.self_matched()) check_set(manifest.reference_dir, manifest.references);

  for (const auto& record : manifest.queries) {
    if (manifest.find_ground_truth(record.index) == nullptr) {
      report.issues.push_back({Severity::kWarning, (manifest.query_dir / record.filename).string(),
                               "query " + std::to_string(record.index) + " has no ground truth entry"});
    }
  }
  return report;
}

}  // namespace jpegvpr
