#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jpegvpr/jpeg_codec.hpp"
#include "jpegvpr/metrics.hpp"

namespace jpegvpr {

/// Fixed-rate pipe with multiplicative protocol overhead. No loss or latency.
struct ChannelModel {
  double rate_bytes_per_second = 0.0;
  double overhead_fraction = 0.0;

  /// Throws ConfigError unless rate > 0 and overhead in [0, 1].
  void validate() const;
};

/// bytes * (1 + overhead) / rate.
double transfer_time(double bytes, const ChannelModel& channel);

/// Least compression whose whole-corpus total fits the budget, or nullopt.
std::optional<CompressionLevel> min_compression_for_budget(const CompressionSweepResult& sweep,
                                                           std::uintmax_t budget_bytes);

struct TransmissionPlan {
  CompressionLevel level{0};
  std::uintmax_t total_bytes = 0;
  double transfer_seconds = 0.0;
  /// Per-frame streaming rate at the level's mean image size.
  double frames_per_second = 0.0;
  std::optional<double> accuracy;
};

TransmissionPlan plan_transmission(const CompressionSweepResult& sweep, CompressionLevel level,
                                   const ChannelModel& channel, const DegradationCurve* curve = nullptr);

struct ParetoPoint {
  CompressionLevel level{0};
  std::uintmax_t bytes = 0;
  double accuracy = 0.0;
  bool pareto_optimal = false;
};

/// Joins curve and sweep by level. A point is dominated when another has
/// strictly fewer bytes and strictly higher accuracy. Throws DataError when
/// the level sets differ.
std::vector<ParetoPoint> accuracy_bytes_pareto(const DegradationCurve& curve, const CompressionSweepResult& sweep);

}  // namespace jpegvpr
