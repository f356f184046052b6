#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "choreo/timeline.hpp"

namespace choreo {

struct JitterBounds {
  std::int64_t speech_ms = 0;
  std::int64_t visual_ms = 0;
  std::int64_t gesture_ms = 0;

  std::int64_t for_channel(Channel c) const;
  friend bool operator==(const JitterBounds&, const JitterBounds&) = default;
};

struct SimConfig {
  std::uint64_t seed = 0;
  JitterBounds jitter;  // dispatch offset drawn uniformly from [-bound, +bound]
  double epsilon_ms = 1.0;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct TraceRecord {
  std::string event_id;
  Channel channel = Channel::speech;
  std::int64_t scheduled_start = 0;
  std::int64_t actual_start = 0;
  std::int64_t scheduled_end = 0;
  std::int64_t actual_end = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ExecutionTrace {
  std::string tour_id;
  SimConfig config;
  std::vector<TraceRecord> records;  // sorted by actual_start

  friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

// Replays the timeline on a virtual clock. Every channel is an exclusive
// resource served in schedule order: an event dispatches at
// max(scheduled + jitter, 0) but never before its predecessor on the same
// channel has finished, and keeps its scheduled duration. Throws
// Error(invalid_input) when the timeline has violations.
ExecutionTrace simulate(const Timeline& timeline, const SimConfig& config = {});

struct TraceFinding {
  enum class Kind { deviation, overlap };
  Kind kind = Kind::deviation;
  std::vector<std::string> event_ids;
  std::int64_t start_deviation_ms = 0;
  std::int64_t end_deviation_ms = 0;
  std::string message;
};

struct TraceReport {
  std::vector<TraceFinding> findings;
  bool clean() const { return findings.empty(); }
};

inline constexpr double kUnboundedTolerance = std::numeric_limits<double>::infinity();

// Flags each record whose start or end deviates from the schedule by more
// than epsilon_ms, and every overlap of actual intervals within a channel.
// Throws Error(invalid_input) when trace and timeline do not pair up.
TraceReport verify_trace(const ExecutionTrace& trace, const Timeline& timeline, double epsilon_ms);

}  // namespace choreo
