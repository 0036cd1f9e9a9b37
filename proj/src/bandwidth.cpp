#include "jpegvpr/bandwidth.hpp"

#include <algorithm>
#include <set>

#include "jpegvpr/error.hpp"

namespace jpegvpr {

void ChannelModel::validate() const {
  if (!(rate_bytes_per_second > 0.0)) throw ConfigError("channel rate must be > 0 bytes/s");
  if (!(overhead_fraction >= 0.0 && overhead_fraction <= 1.0)) {
    throw ConfigError("channel overhead must be in [0, 1]");
  }
}

double transfer_time(double bytes, const ChannelModel& channel) {
  channel.validate();
  return bytes * (1.0 + channel.overhead_fraction) / channel.rate_bytes_per_second;
}

std::optional<CompressionLevel> min_compression_for_budget(const CompressionSweepResult& sweep,
                                                           std::uintmax_t budget_bytes) {
  std::set<CompressionLevel> levels(sweep.levels.begin(), sweep.levels.end());
  for (const auto& level : levels) {
    if (sweep.total_bytes(level.percent()) <= budget_bytes) return level;
  }
  return std::nullopt;
}

TransmissionPlan plan_transmission(const CompressionSweepResult& sweep, CompressionLevel level,
                                   const ChannelModel& channel, const DegradationCurve* curve) {
  channel.validate();
  TransmissionPlan plan;
  plan.level = level;
  plan.total_bytes = sweep.total_bytes(level.percent());
  plan.transfer_seconds = transfer_time(static_cast<double>(plan.total_bytes), channel);
  const double frame_seconds = transfer_time(sweep.mean_bytes(level.percent()), channel);
  plan.frames_per_second = frame_seconds > 0.0 ? 1.0 / frame_seconds : 0.0;
  if (curve != nullptr) {
    for (const auto& point : curve->points) {
      if (point.level == level) plan.accuracy = point.accuracy;
    }
  }
  return plan;
}

std::vector<ParetoPoint> accuracy_bytes_pareto(const DegradationCurve& curve, const CompressionSweepResult& sweep) {
  std::set<int> curve_levels, sweep_levels;
  for (const auto& p : curve.points) curve_levels.insert(p.level.percent());
  for (const auto& l : sweep.levels) sweep_levels.insert(l.percent());
  if (curve_levels != sweep_levels) throw DataError("curve and size sweep cover different level sets");

  std::vector<ParetoPoint> points;
  for (const auto& p : curve.points) {
    points.push_back({p.level, sweep.total_bytes(p.level.percent()), p.accuracy, true});
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.level < b.level; });

  // Sweep by size; a point is dominated iff some strictly smaller point has
  // strictly higher accuracy.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a].bytes < points[b].bytes; });
  double best_smaller = -1.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && points[order[j]].bytes == points[order[i]].bytes) ++j;
    for (std::size_t k = i; k < j; ++k) points[order[k]].pareto_optimal = !(best_smaller > points[order[k]].accuracy);
    for (std::size_t k = i; k < j; ++k) best_smaller = std::max(best_smaller, points[order[k]].accuracy);
    i = j;
  }
  return points;
}

}  // namespace jpegvpr
