// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Runs against the bundled fixture photographs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "fixtures.hpp"
#include "jpegvpr/bandwidth.hpp"
#include "jpegvpr/dataset.hpp"
#include "jpegvpr/descriptor.hpp"
#include "jpegvpr/error.hpp"
#include "jpegvpr/jpeg_codec.hpp"
#include "jpegvpr/matcher.hpp"
#include "jpegvpr/metrics.hpp"
#include "jpegvpr/report.hpp"
#include "jpegvpr/vprd.hpp"
#include "published_sizes.hpp"

namespace fs = std::filesystem;
using namespace jpegvpr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int decimals = 4) { return format_fixed(v, decimals); }

DescriptorSet random_set(std::mt19937& rng, std::size_t count, std::size_t dim, float lo, float hi) {
  std::uniform_real_distribution<float> dist(lo, hi);
  DescriptorSet s;
  s.technique = "random";
  for (std::size_t i = 0; i < count; ++i) {
    DescriptorVector v;
    v.values.resize(dim);
    for (auto& x : v.values) x = dist(rng);
    s.descriptors.push_back(std::move(v));
    s.filenames.push_back("f" + std::to_string(i));
  }
  return s;
}

Outcome matcher_oracle() {
  std::mt19937 rng(2024);
  const auto q = random_set(rng, 50, 64, 0.0f, 1.0f);
  const auto r = random_set(rng, 50, 64, 0.0f, 1.0f);
  Stopwatch clock;
  const auto matrix = similarity_matrix(q, r);
  const auto matches = match_all(q, r);
  const double elapsed = clock.seconds();

  double worst = 0.0;
  int argmax_mismatch = 0;
  for (int i = 0; i < 50; ++i) {
    long double best = -2.0L;
    int best_j = -1;
    for (int j = 0; j < 50; ++j) {
      long double dot = 0, nq = 0, nr = 0;
      for (int k = 0; k < 64; ++k) {
        const long double a = q.descriptors[i].values[k];
        const long double b = r.descriptors[j].values[k];
        dot += a * b;
        nq += a * a;
        nr += b * b;
      }
      const long double s = dot / (std::sqrt(nq) * std::sqrt(nr));
      worst = std::max(worst, static_cast<double>(std::fabs(s - matrix.at(i, j))));
      if (s > best) {
        best = s;
        best_j = j;
      }
    }
    if (matches[i].matched_ref_index != best_j) ++argmax_mismatch;
  }
  std::ostringstream diff;
  diff << std::scientific << std::setprecision(2) << worst;
  return {worst <= 1e-9 && argmax_mismatch == 0 && elapsed < 1.0,
          "max |diff| " + diff.str() + ", argmax mismatches " + std::to_string(argmax_mismatch) + ", " +
              fmt(elapsed, 3) + " s (limits 1e-9, 0, 1 s)"};
}

Outcome cosine_spot_values() {
  const std::vector<float> a{1, 2, 2}, b{2, 1, 2}, x{1, 0, 0}, y{0, 1, 0};
  const double s1 = cosine_similarity(a, b);
  const double s2 = cosine_similarity(a, a);
  const double s3 = cosine_similarity(x, y);
  return {std::fabs(s1 - 8.0 / 9.0) <= 1e-6 && s2 == 1.0 && s3 == 0.0,
          "8/9 case " + fmt(s1, 9) + ", identity " + fmt(s2, 9) + ", orthogonal " + fmt(s3, 9)};
}

Outcome self_match(const fs::path& work) {
  const auto manifest = load_manifest(testing::make_self_corpus(work / "self"));
  const auto set = compute_hog_set(manifest.query_dir, manifest.queries, {}, "hog", CompressionLevel(0));
  const auto result = accuracy(match_all(set, set), manifest.ground_truth, manifest.frame_tolerance,
                               manifest.reference_count());
  return {result.accuracy == 1.0, std::to_string(manifest.query_count()) + " photographs, accuracy " +
                                      fmt(result.accuracy, 9) + " (N_c " + std::to_string(result.correct) + ")"};
}

Outcome size_shape(const fs::path& work, CompressionSweepResult& sweep_out) {
  const auto manifest = load_manifest(testing::make_self_corpus(work / "photos"));
  Stopwatch clock;
  sweep_out = sweep_compress(manifest, default_levels(), work / "photos_sweep");
  const double elapsed = clock.seconds();

  bool monotone = manifest.query_count() >= 20 && sweep_out.failures.empty();
  std::ostringstream detail;
  detail << manifest.query_count() << " photographs, totals";
  for (std::size_t i = 0; i < sweep_out.levels.size(); ++i) {
    const auto cur = sweep_out.total_bytes(sweep_out.levels[i].percent());
    detail << " " << sweep_out.levels[i].percent() << "%=" << cur;
    if (i > 0) {
      const auto prev = sweep_out.total_bytes(sweep_out.levels[i - 1].percent());
      if (static_cast<double>(cur) > 1.02 * static_cast<double>(prev)) monotone = false;
    }
  }
  for (const auto& row : testing::published_sizes()) {
    for (std::size_t i = 1; i < row.megabytes.size(); ++i) {
      if (row.megabytes[i] > row.megabytes[i - 1]) monotone = false;
    }
  }
  detail << ", " << fmt(elapsed, 2) << " s (limit 30 s)";
  return {monotone && elapsed < 30.0, detail.str()};
}

Outcome entropy_trend(const fs::path& work) {
  const fs::path photo_sweep = work / "photos_sweep";
  const double e0 = average_entropy(load_manifest(level_dir(photo_sweep, CompressionLevel(0)) / "manifest.json"),
                                    CompressionLevel(0))
                        .mean_bits;
  const double e97 = average_entropy(load_manifest(level_dir(photo_sweep, CompressionLevel(97)) / "manifest.json"),
                                     CompressionLevel(97))
                         .mean_bits;

  const auto flat = load_manifest(testing::make_flat_corpus(work / "flat"));
  sweep_compress(flat, default_levels(), work / "flat_sweep");
  double lo = 1e9, hi = -1e9;
  for (const auto& level : default_levels()) {
    const double e = average_entropy(load_manifest(level_dir(work / "flat_sweep", level) / "manifest.json"), level)
                         .mean_bits;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {e97 < e0 && hi - lo < 0.2, "photographs " + fmt(e0) + " -> " + fmt(e97) +
                                         " bits, flat-colour spread " + fmt(hi - lo) + " bits (limit 0.2)"};
}

struct ShiftRun {
  DatasetManifest manifest;
  DescriptorsByLevel descriptors;
  DegradationCurve curve;
};

Outcome hog_curve(const fs::path& work, ShiftRun& run) {
  run.manifest = load_manifest(testing::make_shift_corpus(work / "shift", 100));
  Stopwatch clock;
  const auto levels = default_levels();
  const auto sweep = sweep_compress(run.manifest, levels, work / "shift_sweep");
  run.descriptors = testing::hog_levels(work / "shift_sweep", levels);
  run.curve = degradation_curve(run.descriptors, run.manifest, "hog", levels, run.manifest.frame_tolerance);
  const double elapsed = clock.seconds();

  std::ostringstream detail;
  detail << run.manifest.query_count() << " places, accuracy";
  for (const auto& p : run.curve.points) detail << " " << p.level.percent() << "%=" << fmt(p.accuracy, 3);
  detail << ", " << fmt(elapsed, 2) << " s (limit 60 s)";
  const bool ok = sweep.failures.empty() && run.curve.points.size() == 6 &&
                  run.curve.points.back().accuracy <= run.curve.points.front().accuracy && elapsed < 60.0;
  return {ok, detail.str()};
}

bool same_result(const EvaluationResult& a, const EvaluationResult& b) {
  if (a.correct != b.correct || a.reference_count != b.reference_count || a.query_count != b.query_count ||
      a.accuracy != b.accuracy || a.records.size() != b.records.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    if (a.records[i].matched_ref_index != b.records[i].matched_ref_index || a.records[i].score != b.records[i].score ||
        a.records[i].correct != b.records[i].correct) {
      return false;
    }
  }
  return true;
}

Outcome nonuniform_consistency(const ShiftRun& run) {
  const auto levels = default_levels();
  const auto grid = nonuniform_grid(run.descriptors, run.manifest, "hog", levels, levels, run.manifest.frame_tolerance);
  bool ok = grid.cells.size() == 36 && same_result(grid.cells.at({0, 0}), run.curve.results.front());
  int diagonal_equal = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const int p = levels[i].percent();
    if (same_result(grid.cells.at({p, p}), run.curve.results[i])) ++diagonal_equal;
  }
  ok = ok && diagonal_equal == 6;
  return {ok, "cell (0,0) accuracy " + fmt(grid.cells.at({0, 0}).accuracy, 3) + ", " +
                  std::to_string(diagonal_equal) + "/6 diagonal cells identical to the curve"};
}

Outcome vprd_round_trip(const fs::path& work) {
  std::mt19937 rng(77);
  std::vector<std::pair<std::size_t, std::size_t>> shapes = {{1, 1}, {1000, 8192}, {1000, 1}, {1, 8192}};
  for (int t = 0; t < 12; ++t) shapes.emplace_back(1 + rng() % 1000, 1 + rng() % 8192);
  int exact = 0;
  for (const auto& [count, dim] : shapes) {
    const auto set = random_set(rng, count, dim, -1e6f, 1e6f);
    write_descriptor_file(set, work / "rt.vprd");
    const auto back = load_descriptor_file(work / "rt.vprd");
    bool same = back.technique == set.technique && back.filenames == set.filenames && back.size() == set.size();
    for (std::size_t i = 0; same && i < count; ++i) {
      same = std::memcmp(back.descriptors[i].values.data(), set.descriptors[i].values.data(), dim * 4) == 0;
    }
    if (same) ++exact;
  }

  DescriptorSet small;
  small.technique = "hog";
  small.descriptors = {DescriptorVector{{1.0f, 2.0f}}};
  small.filenames = {"a"};
  const Bytes good = encode_vprd(small);
  std::vector<Bytes> corrupt;
  auto mutate = [&](std::size_t at, std::uint8_t value) {
    Bytes b = good;
    b[at] = value;
    corrupt.push_back(std::move(b));
  };
  mutate(0, 'X');   // magic
  mutate(3, 'd');   // magic
  mutate(4, 2);     // version
  mutate(6, 1);     // reserved
  mutate(8, 0);     // count 0
  mutate(8, 2);     // count larger than payload
  mutate(12, 0);    // dim 0
  mutate(12, 200);  // dim larger than payload
  mutate(16, 200);  // label length past end
  corrupt.push_back(Bytes(good.begin(), good.begin() + 10));
  corrupt.push_back(Bytes{});
  Bytes trailing = good;
  trailing.push_back(0);
  corrupt.push_back(trailing);
  int rejected = 0;
  for (const auto& b : corrupt) {
    try {
      decode_vprd(b);
    } catch (const DataError&) {
      ++rejected;
    }
  }
  const bool ok = exact == static_cast<int>(shapes.size()) && rejected == static_cast<int>(corrupt.size());
  return {ok, std::to_string(exact) + "/" + std::to_string(shapes.size()) +
                  " sets bit-exact (largest 1000x8192), " + std::to_string(rejected) + "/" +
                  std::to_string(corrupt.size()) + " corrupt files rejected with DataError"};
}

Outcome bandwidth_checks() {
  const auto& campus = testing::published_sizes()[2];
  const auto chosen = min_compression_for_budget(testing::sweep_from_published(campus), 5'000'000);

  std::mt19937 rng(31);
  int agree = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    DegradationCurve curve;
    CompressionSweepResult sweep;
    for (int p = 0; p < 100; ++p) {
      if (rng() % 8 != 0 && !(p == 99 && curve.points.empty())) continue;
      curve.points.push_back({CompressionLevel(p), static_cast<int>(rng() % 21) / 20.0});
      sweep.levels.emplace_back(p);
      sweep.images[p].push_back({"query", 0, "query/x.jpg", 1 + rng() % 50});
    }
    const auto points = accuracy_bytes_pareto(curve, sweep);
    bool same = true;
    for (const auto& a : points) {
      bool dominated = false;
      for (const auto& b : points) dominated |= b.bytes < a.bytes && b.accuracy > a.accuracy;
      same &= a.pareto_optimal == !dominated;
    }
    if (same) ++agree;
  }
  const bool ok = chosen && chosen->percent() == 80 && agree == trials;
  return {ok, "5 MB budget on Campus Loop sizes -> " + (chosen ? std::to_string(chosen->percent()) + "%" : "none") +
                  ", Pareto flags agree on " + std::to_string(agree) + "/" + std::to_string(trials) + " random curves"};
}

int cli(const std::vector<std::string>& args, std::string& err) {
  std::ostringstream out, errs;
  const int status = cli::run(args, out, errs);
  err += errs.str();
  return status;
}

std::string run_pipeline(const fs::path& manifest, const fs::path& dir, int workers) {
  const std::string w = std::to_string(workers);
  const std::string m = manifest.string();
  const std::string d = dir.string();
  std::string err;
  const std::vector<std::vector<std::string>> steps = {
      {"--workers", w, "compress", "--manifest", m, "--out", d + "/sweep"},
      {"--workers", w, "extract", "--sweep", d + "/sweep", "--out", d + "/desc"},
      {"--workers", w, "match", "--queries", d + "/desc/97/query.vprd", "--refs", d + "/desc/0/reference.vprd", "--out",
       d + "/matches_97_0.csv"},
      {"--workers", w, "evaluate", "--manifest", m, "--matches", d + "/matches_97_0.csv", "--q-level", "97",
       "--r-level", "0", "--out", d + "/cell_97_0.csv"},
      {"--workers", w, "evaluate", "--manifest", m, "--descriptors", d + "/desc", "--out", d + "/curve.csv"},
      {"--workers", w, "nonuniform", "--manifest", m, "--descriptors", d + "/desc", "--out", d + "/grid.csv"},
      {"--workers", w, "entropy", "--sweep", d + "/sweep", "--out", d + "/entropy.csv", "--images-out",
       d + "/entropy_images.csv"},
      {"--workers", w, "report", "--inputs", d + "/curve.csv", d + "/grid.csv", "--out", d + "/results.csv"},
      {"--workers", w, "bandwidth", "--sweep", d + "/sweep/sizes.csv", "--rate-bytes", "250000", "--budget-bytes",
       "400000", "--curve", d + "/curve.csv", "--plan-out", d + "/plan.json", "--pareto-out", d + "/pareto.csv"},
  };
  for (const auto& step : steps) {
    if (const int status = cli(step, err); status != kExitOk) {
      return "step '" + step[2] + "' exited " + std::to_string(status) + ": " + err;
    }
  }
  return "";
}

Outcome determinism(const fs::path& work) {
  const auto manifest = testing::make_shift_corpus(work / "det_corpus", 100);
  for (int workers : {1, 8}) {
    const std::string problem = run_pipeline(manifest, work / ("det_" + std::to_string(workers)), workers);
    if (!problem.empty()) return {false, "workers " + std::to_string(workers) + ": " + problem};
  }
  std::vector<fs::path> artifacts;
  for (const auto& entry : fs::recursive_directory_iterator(work / "det_1")) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".csv" || ext == ".vprd" || ext == ".jpg")) {
      artifacts.push_back(fs::relative(entry.path(), work / "det_1"));
    }
  }
  std::sort(artifacts.begin(), artifacts.end());
  int csv = 0, identical = 0;
  std::string first_difference;
  for (const auto& rel : artifacts) {
    if (rel.extension() == ".csv") ++csv;
    const fs::path other = work / "det_8" / rel;
    if (fs::exists(other) && testing::read_text(work / "det_1" / rel) == testing::read_text(other)) {
      ++identical;
    } else if (first_difference.empty()) {
      first_difference = rel.string();
    }
  }
  const bool ok = csv >= 9 && identical == static_cast<int>(artifacts.size());
  return {ok, std::to_string(identical) + "/" + std::to_string(artifacts.size()) + " artifacts identical (" +
                  std::to_string(csv) + " CSV)" + (first_difference.empty() ? "" : ", first difference " + first_difference)};
}

}  // namespace

int main() {
  testing::TempDir work("jpegvpr-acceptance");
  CompressionSweepResult photo_sweep;
  ShiftRun shift;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"matcher oracle equivalence", matcher_oracle},
      {"cosine spot values", cosine_spot_values},
      {"self-match sanity", [&] { return self_match(work.path()); }},
      {"compressed size shape", [&] { return size_shape(work.path(), photo_sweep); }},
      {"entropy trend", [&] { return entropy_trend(work.path()); }},
      {"HOG degradation curve", [&] { return hog_curve(work.path(), shift); }},
      {"non-uniform consistency", [&] { return nonuniform_consistency(shift); }},
      {"VPRD round-trip", [&] { return vprd_round_trip(work.path()); }},
      {"bandwidth", bandwidth_checks},
      {"determinism", [&] { return determinism(work.path()); }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS  " : "FAIL  ") << name << ": " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
