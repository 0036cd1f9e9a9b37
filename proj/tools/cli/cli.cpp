#include "cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "jpegvpr/bandwidth.hpp"
#include "jpegvpr/dataset.hpp"
#include "jpegvpr/descriptor.hpp"
#include "jpegvpr/error.hpp"
#include "jpegvpr/jpeg_codec.hpp"
#include "jpegvpr/matcher.hpp"
#include "jpegvpr/metrics.hpp"
#include "jpegvpr/parallel.hpp"
#include "jpegvpr/report.hpp"
#include "jpegvpr/vprd.hpp"

namespace jpegvpr::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDefaultLevels = "0,50,80,90,95,97";

struct HogFlags {
  int width = 128;
  int height = 128;
  int cell = 8;
  int block = 2;
  int stride = 1;
  int bins = 9;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--hog-width", width, "HOG resize width in pixels")->capture_default_str();
    cmd->add_option("--hog-height", height, "HOG resize height in pixels")->capture_default_str();
    cmd->add_option("--hog-cell", cell, "HOG cell size in pixels")->capture_default_str();
    cmd->add_option("--hog-block", block, "HOG block size in cells")->capture_default_str();
    cmd->add_option("--hog-stride", stride, "HOG block stride in cells")->capture_default_str();
    cmd->add_option("--hog-bins", bins, "HOG orientation bins over 0-180 degrees")->capture_default_str();
  }
  HogParams params() const {
    HogParams p{width, height, cell, block, stride, bins};
    p.validate();
    return p;
  }
  json to_json() const {
    return {{"width", width}, {"height", height}, {"cell", cell}, {"block", block}, {"stride", stride}, {"bins", bins}};
  }
};

struct Options {
  int workers = 1;
  std::string format = "csv";

  // shared
  std::string manifest;
  std::string levels = kDefaultLevels;
  std::string out;
  std::string technique = "hog";
  std::optional<int> tolerance;

  // compress / entropy / extract --sweep
  std::string sweep_dir;
  std::string images_out;

  // extract
  std::string set = "query";
  std::string descriptor = "hog";
  int level = 0;
  HogFlags hog;

  // match
  std::string queries;
  std::string refs;
  std::string matrix_out;

  // evaluate / nonuniform
  std::string matches;
  std::string descriptors_dir;
  int q_level = 0;
  int r_level = 0;
  std::string q_levels = "0,97";
  std::string r_levels = "0,97";

  // bandwidth
  std::string sizes_csv;
  double rate = 0.0;
  double overhead = 0.0;
  std::optional<long long> budget;
  std::string curve_csv;
  std::optional<int> plan_level;
  std::string plan_out;
  std::string pareto_out;

  // report
  std::vector<std::string> inputs;
};

DescriptorsByLevel load_descriptor_dir(const fs::path& dir, const std::vector<CompressionLevel>& levels) {
  DescriptorsByLevel out;
  for (const auto& level : levels) {
    const fs::path base = level_dir(dir, level);
    LevelDescriptors pair{load_descriptor_file(base / "query.vprd"), load_descriptor_file(base / "reference.vprd")};
    pair.queries.level = level;
    pair.references.level = level;
    out.emplace(level.percent(), std::move(pair));
  }
  return out;
}

std::vector<fs::path> descriptor_inputs(const fs::path& dir, const std::vector<CompressionLevel>& levels) {
  std::vector<fs::path> inputs;
  for (const auto& level : levels) {
    inputs.push_back(level_dir(dir, level) / "query.vprd");
    inputs.push_back(level_dir(dir, level) / "reference.vprd");
  }
  return inputs;
}

json levels_json(const std::vector<CompressionLevel>& levels) {
  json out = json::array();
  for (const auto& l : levels) out.push_back(l.percent());
  return out;
}

void write_results(const std::vector<ResultRow>& rows, const Options& o) {
  if (o.format == "json") {
    write_text(o.out, results_to_json(rows).dump(2) + "\n");
  } else {
    write_csv(results_to_csv(rows), o.out);
  }
}

DescriptorSet extract_set(const fs::path& dir, const std::vector<ImageRecord>& records, const Options& o,
                          CompressionLevel level) {
  if (o.descriptor != "hog") throw ConfigError("unknown descriptor '" + o.descriptor + "' (supported: hog)");
  return compute_hog_set(dir, records, o.hog.params(), o.technique, level, o.workers);
}

int cmd_compress(const Options& o, std::ostream& out, std::ostream& err) {
  const auto levels = parse_levels(o.levels);
  const DatasetManifest manifest = load_manifest(o.manifest);
  const fs::path dir(o.out);
  const CompressionSweepResult sweep = sweep_compress(manifest, levels, dir, {o.workers});
  write_csv(sweep_to_csv(sweep), dir / "sizes.csv");
  write_run_metadata(dir, "compress",
                     {{"levels", levels_json(levels)},
                      {"zero_percent_note", "0% re-encodes at quality 100 (4:4:4); originals are not copied"},
                      {"subsampling_threshold_percent", CompressionLevel::kSubsamplingThreshold}},
                     {o.manifest});
  for (const auto& level : levels) {
    out << level.percent() << "%\t" << sweep.total_bytes(level.percent()) << " bytes\n";
  }
  if (!sweep.failures.empty()) {
    for (const auto& f : sweep.failures) err << "error: " << f.percent << "%: " << f.message << "\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream&) {
  if (!o.sweep_dir.empty()) {
    const auto levels = parse_levels(o.levels);
    const fs::path out_dir(o.out);
    std::vector<fs::path> inputs;
    for (const auto& level : levels) {
      const fs::path manifest_path = level_dir(o.sweep_dir, level) / "manifest.json";
      inputs.push_back(manifest_path);
      const DatasetManifest m = load_manifest(manifest_path);
      const DescriptorSet queries = extract_set(m.query_dir, m.queries, o, level);
      const DescriptorSet refs = m.self_matched() ? queries : extract_set(m.reference_dir, m.references, o, level);
      std::error_code ec;
      fs::create_directories(level_dir(out_dir, level), ec);
      if (ec) throw DataError("cannot create " + level_dir(out_dir, level).string());
      write_descriptor_file(queries, level_dir(out_dir, level) / "query.vprd");
      write_descriptor_file(refs, level_dir(out_dir, level) / "reference.vprd");
      out << level.percent() << "%\t" << queries.size() << " queries, " << refs.size() << " references, dim "
          << queries.dim() << "\n";
    }
    write_run_metadata(out_dir, "extract",
                       {{"descriptor", o.descriptor}, {"technique", o.technique}, {"hog", o.hog.to_json()},
                        {"levels", levels_json(levels)}},
                       inputs);
    return kExitOk;
  }

  if (o.manifest.empty()) throw ConfigError("extract needs --manifest or --sweep");
  if (o.set != "query" && o.set != "reference") throw ConfigError("--set must be query or reference");
  const DatasetManifest m = load_manifest(o.manifest);
  const bool queries = o.set == "query";
  const DescriptorSet set = extract_set(queries ? m.query_dir : m.reference_dir, queries ? m.queries : m.references,
                                        o, CompressionLevel(o.level));
  const std::size_t bytes = write_descriptor_file(set, o.out);
  write_run_metadata(o.out, "extract",
                     {{"descriptor", o.descriptor}, {"technique", o.technique}, {"hog", o.hog.to_json()},
                      {"set", o.set}, {"level", o.level}},
                     {o.manifest});
  out << set.size() << " descriptors of dim " << set.dim() << " (" << bytes << " bytes)\n";
  return kExitOk;
}

int cmd_match(const Options& o, std::ostream& out, std::ostream&) {
  const DescriptorSet queries = load_descriptor_file(o.queries);
  const DescriptorSet refs = load_descriptor_file(o.refs);
  const SimilarityMatrix matrix = similarity_matrix(queries, refs, o.workers);
  std::vector<MatchRecord> records;
  for (int i = 0; i < matrix.rows; ++i) {
    const auto row = matrix.row(i);
    records.push_back(best_match(ScoreList{i, {row.begin(), row.end()}}));
  }
  write_csv(matches_to_csv(records), o.out);
  if (!o.matrix_out.empty()) write_descriptor_file(matrix_as_descriptor_set(matrix, queries), o.matrix_out);
  write_run_metadata(o.out, "match", {{"queries", o.queries}, {"refs", o.refs}}, {o.queries, o.refs});
  out << records.size() << " matches\n";
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream&) {
  const DatasetManifest manifest = load_manifest(o.manifest);
  const int tolerance = o.tolerance.value_or(manifest.frame_tolerance);
  std::vector<ResultRow> rows;
  std::vector<fs::path> inputs{o.manifest};
  json params = {{"technique", o.technique}, {"tolerance", tolerance}, {"format", o.format}};

  if (!o.matches.empty()) {
    EvaluationResult r = accuracy(matches_from_csv(read_csv(o.matches)), manifest.ground_truth, tolerance,
                                  manifest.reference_count());
    r.technique = o.technique;
    r.dataset = manifest.name;
    r.query_level = CompressionLevel(o.q_level);
    r.ref_level = CompressionLevel(o.r_level);
    rows.push_back(result_row(r));
    inputs.emplace_back(o.matches);
    params["q_level"] = o.q_level;
    params["r_level"] = o.r_level;
  } else if (!o.descriptors_dir.empty()) {
    const auto levels = parse_levels(o.levels);
    const DegradationCurve curve = degradation_curve(load_descriptor_dir(o.descriptors_dir, levels), manifest,
                                                     o.technique, levels, tolerance, o.workers);
    rows = curve_rows(curve);
    const auto more = descriptor_inputs(o.descriptors_dir, levels);
    inputs.insert(inputs.end(), more.begin(), more.end());
    params["levels"] = levels_json(levels);
  } else {
    throw ConfigError("evaluate needs --matches or --descriptors");
  }
  write_results(rows, o);
  write_run_metadata(o.out, "evaluate", params, inputs);
  for (const auto& r : rows) {
    out << r.q_level << "%/" << r.r_level << "%\taccuracy " << format_fixed(r.accuracy, 4) << " (N_c " << r.correct
        << ", N_r " << r.reference_count << ", N_q " << r.query_count << ")\n";
  }
  return kExitOk;
}

int cmd_nonuniform(const Options& o, std::ostream& out, std::ostream&) {
  const DatasetManifest manifest = load_manifest(o.manifest);
  const int tolerance = o.tolerance.value_or(manifest.frame_tolerance);
  const auto q_levels = parse_levels(o.q_levels);
  const auto r_levels = parse_levels(o.r_levels);
  std::set<CompressionLevel> all(q_levels.begin(), q_levels.end());
  all.insert(r_levels.begin(), r_levels.end());
  const std::vector<CompressionLevel> needed(all.begin(), all.end());

  const NonUniformGrid grid = nonuniform_grid(load_descriptor_dir(o.descriptors_dir, needed), manifest,
                                              o.technique, q_levels, r_levels, tolerance, o.workers);
  const auto rows = grid_rows(grid);
  write_results(rows, o);
  auto inputs = descriptor_inputs(o.descriptors_dir, needed);
  inputs.insert(inputs.begin(), o.manifest);
  write_run_metadata(o.out, "nonuniform",
                     {{"technique", o.technique}, {"tolerance", tolerance}, {"q_levels", levels_json(q_levels)},
                      {"r_levels", levels_json(r_levels)}},
                     inputs);
  for (const auto& r : rows) out << r.q_level << "%/" << r.r_level << "%\taccuracy " << format_fixed(r.accuracy, 4) << "\n";
  return kExitOk;
}

int cmd_entropy(const Options& o, std::ostream& out, std::ostream&) {
  const auto levels = parse_levels(o.levels);
  std::vector<EntropyReport> reports;
  std::vector<fs::path> inputs;
  for (const auto& level : levels) {
    const fs::path manifest_path = level_dir(o.sweep_dir, level) / "manifest.json";
    if (!fs::exists(manifest_path)) {
      throw DataError("missing compressed corpus for " + std::to_string(level.percent()) + "% (" +
                      manifest_path.string() + ")");
    }
    inputs.push_back(manifest_path);
    reports.push_back(average_entropy(load_manifest(manifest_path), level, o.workers));
    out << level.percent() << "%\tmean entropy " << format_fixed(reports.back().mean_bits, 4) << " bits\n";
  }
  write_csv(entropy_summary_to_csv(reports), o.out);
  if (!o.images_out.empty()) write_csv(entropy_images_to_csv(reports), o.images_out);
  write_run_metadata(o.out, "entropy", {{"levels", levels_json(levels)}, {"set", "query"}}, inputs);
  return kExitOk;
}

int cmd_bandwidth(const Options& o, std::ostream& out, std::ostream&) {
  const ChannelModel channel{o.rate, o.overhead};
  channel.validate();
  const CompressionSweepResult sweep = sweep_from_csv(read_csv(o.sizes_csv));
  std::optional<DegradationCurve> curve;
  if (!o.curve_csv.empty()) {
    curve = curve_from_rows(results_from_csv(read_csv(o.curve_csv)), o.technique == "hog" ? "" : o.technique);
  }

  json doc;
  std::optional<CompressionLevel> chosen;
  if (o.budget) {
    if (*o.budget < 0) throw ConfigError("--budget-bytes must be >= 0");
    doc["budget_bytes"] = *o.budget;
    chosen = min_compression_for_budget(sweep, static_cast<std::uintmax_t>(*o.budget));
  } else {
    chosen = CompressionLevel(o.plan_level.value_or(sweep.levels.front().percent()));
  }
  doc["feasible"] = chosen.has_value();
  if (chosen) {
    doc["plan"] = plan_to_json(plan_transmission(sweep, *chosen, channel, curve ? &*curve : nullptr), channel);
  } else {
    doc["plan"] = nullptr;
  }
  const std::string text = doc.dump(2) + "\n";
  if (o.plan_out.empty()) {
    out << text;
  } else {
    write_text(o.plan_out, text);
  }

  if (curve) {
    const auto points = accuracy_bytes_pareto(*curve, sweep);
    if (!o.pareto_out.empty()) {
      write_csv(pareto_to_csv(points), o.pareto_out);
    } else {
      out << format_csv(pareto_to_csv(points));
    }
  } else if (!o.pareto_out.empty()) {
    throw ConfigError("--pareto-out needs --curve");
  }

  const fs::path artifact = !o.plan_out.empty() ? fs::path(o.plan_out) : fs::path(o.pareto_out);
  if (!artifact.empty()) {
    std::vector<fs::path> inputs{o.sizes_csv};
    if (!o.curve_csv.empty()) inputs.emplace_back(o.curve_csv);
    write_run_metadata(artifact, "bandwidth",
                       {{"rate_bytes_per_second", o.rate}, {"overhead_fraction", o.overhead},
                        {"budget_bytes", o.budget ? json(*o.budget) : json(nullptr)}},
                       inputs);
  }
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<ResultRow> rows;
  std::vector<fs::path> inputs;
  for (const auto& input : o.inputs) {
    const auto more = results_from_csv(read_csv(input));
    rows.insert(rows.end(), more.begin(), more.end());
    inputs.emplace_back(input);
  }
  write_results(rows, o);
  write_run_metadata(o.out, "report", {{"format", o.format}}, inputs);
  out << rows.size() << " rows\n";
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  const DatasetManifest m = load_manifest(o.manifest);
  const ValidationReport report = validate_dataset(m);
  out << m.name << ": " << m.query_count() << " queries, " << m.reference_count() << " references, "
      << (m.identity_ground_truth ? "identity" : "explicit") << " ground truth, tolerance " << m.frame_tolerance
      << "\n";
  for (const auto& issue : report.issues) {
    out << (issue.severity == ValidationIssue::Severity::kError ? "error: " : "warning: ")
        << (issue.file.empty() ? "" : issue.file + ": ") << issue.message << "\n";
  }
  return report.usable() ? kExitOk : kExitData;
}

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("JPEGVPR_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"JPEG compression benchmark for visual place recognition"};
  app.require_subcommand(1);
  Options o;
  o.workers = default_workers();
  app.add_option("--workers", o.workers, "Worker threads (default $JPEGVPR_WORKERS or 1)")
      ->check(CLI::PositiveNumber);

  auto* compress = app.add_subcommand("compress", "Encode a corpus at each compression level");
  compress->add_option("--manifest", o.manifest, "Dataset manifest (JSON)")->required();
  compress->add_option("--levels", o.levels, "Compression percentages")->capture_default_str();
  compress->add_option("--out", o.out, "Output directory")->required();

  auto* extract = app.add_subcommand("extract", "Compute descriptors and write VPRD files");
  auto* ex_manifest = extract->add_option("--manifest", o.manifest, "Manifest of one corpus");
  extract->add_option("--set", o.set, "query or reference")->capture_default_str();
  extract->add_option("--level", o.level, "Compression percent recorded for the set")->capture_default_str();
  auto* ex_sweep = extract->add_option("--sweep", o.sweep_dir, "Output directory of `compress`");
  ex_sweep->excludes(ex_manifest);
  extract->add_option("--levels", o.levels, "Levels to extract with --sweep")->capture_default_str();
  extract->add_option("--descriptor", o.descriptor, "Descriptor (hog)")->capture_default_str();
  extract->add_option("--technique", o.technique, "Technique label stored in the file")->capture_default_str();
  extract->add_option("--out", o.out, "VPRD file, or directory with --sweep")->required();
  o.hog.add_to(extract);

  auto* match = app.add_subcommand("match", "Cosine-match query descriptors against references");
  match->add_option("--queries", o.queries, "Query VPRD")->required();
  match->add_option("--refs", o.refs, "Reference VPRD")->required();
  match->add_option("--out", o.out, "Match CSV")->required();
  match->add_option("--matrix-out", o.matrix_out, "Write the similarity matrix as VPRD");

  auto* evaluate = app.add_subcommand("evaluate", "Accuracy of a match file, or a degradation curve");
  evaluate->add_option("--manifest", o.manifest, "Original dataset manifest (ground truth)")->required();
  auto* ev_matches = evaluate->add_option("--matches", o.matches, "Match CSV from `match`");
  auto* ev_desc = evaluate->add_option("--descriptors", o.descriptors_dir, "Descriptor directory from `extract --sweep`");
  ev_desc->excludes(ev_matches);
  evaluate->add_option("--levels", o.levels, "Levels for the curve")->capture_default_str();
  evaluate->add_option("--q-level", o.q_level, "Query level label for --matches")->capture_default_str();
  evaluate->add_option("--r-level", o.r_level, "Reference level label for --matches")->capture_default_str();
  evaluate->add_option("--technique", o.technique)->capture_default_str();
  evaluate->add_option("--tolerance", o.tolerance, "Frame tolerance (default from manifest)");
  evaluate->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  evaluate->add_option("--out", o.out, "Results file")->required();

  auto* nonuniform = app.add_subcommand("nonuniform", "Accuracy grid with queries and references at different levels");
  nonuniform->add_option("--manifest", o.manifest)->required();
  nonuniform->add_option("--descriptors", o.descriptors_dir)->required();
  nonuniform->add_option("--q-levels", o.q_levels)->capture_default_str();
  nonuniform->add_option("--r-levels", o.r_levels)->capture_default_str();
  nonuniform->add_option("--technique", o.technique)->capture_default_str();
  nonuniform->add_option("--tolerance", o.tolerance);
  nonuniform->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  nonuniform->add_option("--out", o.out)->required();

  auto* entropy = app.add_subcommand("entropy", "Mean query-image entropy per compression level");
  entropy->add_option("--sweep", o.sweep_dir, "Output directory of `compress`")->required();
  entropy->add_option("--levels", o.levels)->capture_default_str();
  entropy->add_option("--out", o.out, "Summary CSV")->required();
  entropy->add_option("--images-out", o.images_out, "Per-image CSV");

  auto* bandwidth = app.add_subcommand("bandwidth", "Transmission feasibility of a size sweep");
  bandwidth->add_option("--sweep", o.sizes_csv, "sizes.csv from `compress`")->required();
  bandwidth->add_option("--rate-bytes", o.rate, "Channel rate in bytes/second")->required();
  bandwidth->add_option("--overhead", o.overhead, "Protocol overhead fraction")->capture_default_str();
  bandwidth->add_option("--budget-bytes", o.budget, "Corpus byte budget");
  bandwidth->add_option("--level", o.plan_level, "Plan this level when no budget is given");
  bandwidth->add_option("--curve", o.curve_csv, "Results CSV with uniform rows");
  bandwidth->add_option("--technique", o.technique, "Technique to take from --curve")->capture_default_str();
  bandwidth->add_option("--plan-out", o.plan_out, "Plan JSON (default stdout)");
  bandwidth->add_option("--pareto-out", o.pareto_out, "Pareto CSV (default stdout)");

  auto* report = app.add_subcommand("report", "Concatenate results CSVs into one long-format table");
  report->add_option("--inputs", o.inputs, "Results CSVs")->required()->expected(1, -1);
  report->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  report->add_option("--out", o.out)->required();

  auto* validate = app.add_subcommand("validate", "Decode every image and check ground-truth coverage");
  validate->add_option("--manifest", o.manifest)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (compress->parsed()) return cmd_compress(o, out, err);
    if (extract->parsed()) return cmd_extract(o, out, err);
    if (match->parsed()) return cmd_match(o, out, err);
    if (evaluate->parsed()) return cmd_evaluate(o, out, err);
    if (nonuniform->parsed()) return cmd_nonuniform(o, out, err);
    if (entropy->parsed()) return cmd_entropy(o, out, err);
    if (bandwidth->parsed()) return cmd_bandwidth(o, out, err);
    if (report->parsed()) return cmd_report(o, out, err);
    if (validate->parsed()) return cmd_validate(o, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace jpegvpr::cli
