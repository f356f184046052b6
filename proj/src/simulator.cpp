#include "choreo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>

namespace choreo {

std::int64_t JitterBounds::for_channel(Channel c) const {
  switch (c) {
    case Channel::speech: return speech_ms;
    case Channel::visual: return visual_ms;
    case Channel::gesture: return gesture_ms;
  }
  return 0;
}

namespace {

int channel_rank(Channel c) { return static_cast<int>(c); }

struct Pending {
  std::int64_t ready_at;
  int channel;
  std::size_t index;  // position within the channel queue

  bool operator>(const Pending& o) const {
    if (ready_at != o.ready_at) return ready_at > o.ready_at;
    if (channel != o.channel) return channel > o.channel;
    return index > o.index;
  }
};

}  // namespace

ExecutionTrace simulate(const Timeline& timeline, const SimConfig& config) {
  if (config.jitter.speech_ms < 0 || config.jitter.visual_ms < 0 || config.jitter.gesture_ms < 0) {
    throw Error(ErrorCode::precondition, "jitter bounds must be >= 0");
  }
  const auto report = validate_timeline(timeline);
  if (!report.clean()) {
    throw Error(ErrorCode::invalid_input, "timeline fails validation: " + report.findings.front().message);
  }

  // Per-channel queues in schedule order.
  std::vector<std::vector<const ChannelEvent*>> queues(3);
  for (const auto* e : timeline.events()) queues[static_cast<std::size_t>(channel_rank(e->channel))].push_back(e);
  for (auto& q : queues) {
    std::stable_sort(q.begin(), q.end(), [](const ChannelEvent* a, const ChannelEvent* b) {
      return a->start_ms != b->start_ms ? a->start_ms < b->start_ms : a->id < b->id;
    });
  }

  // Offsets are drawn in a fixed order (channel, then schedule) so the
  // trace depends only on the seed. Modulo mapping keeps the draw portable.
  std::mt19937_64 rng(config.seed);
  std::vector<std::vector<std::int64_t>> requested(3);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto bound = config.jitter.for_channel(static_cast<Channel>(c));
    for (const auto* e : queues[c]) {
      std::int64_t offset = 0;
      if (bound > 0) {
        const auto span = static_cast<std::uint64_t>(2 * bound + 1);
        offset = static_cast<std::int64_t>(rng() % span) - bound;
      }
      requested[c].push_back(std::max<std::int64_t>(0, e->start_ms + offset));
    }
  }

  ExecutionTrace trace;
  trace.tour_id = timeline.tour_id;
  trace.config = config;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> agenda;
  std::vector<std::int64_t> busy_until(3, 0);
  for (std::size_t c = 0; c < 3; ++c) {
    if (!queues[c].empty()) agenda.push({requested[c][0], static_cast<int>(c), 0});
  }
  while (!agenda.empty()) {
    const Pending next = agenda.top();
    agenda.pop();
    const auto c = static_cast<std::size_t>(next.channel);
    if (next.ready_at < busy_until[c]) {
      // Resource still busy: delay, never drop or overlap.
      agenda.push({busy_until[c], next.channel, next.index});
      continue;
    }
    const auto* e = queues[c][next.index];
    TraceRecord rec;
    rec.event_id = e->id;
    rec.channel = e->channel;
    rec.scheduled_start = e->start_ms;
    rec.scheduled_end = e->end_ms;
    rec.actual_start = next.ready_at;
    rec.actual_end = next.ready_at + e->duration_ms();
    busy_until[c] = rec.actual_end;
    trace.records.push_back(std::move(rec));
    if (next.index + 1 < queues[c].size()) {
      agenda.push({requested[c][next.index + 1], next.channel, next.index + 1});
    }
  }
  std::stable_sort(trace.records.begin(), trace.records.end(), [](const TraceRecord& a, const TraceRecord& b) {
    if (a.actual_start != b.actual_start) return a.actual_start < b.actual_start;
    if (a.channel != b.channel) return channel_rank(a.channel) < channel_rank(b.channel);
    return a.event_id < b.event_id;
  });
  return trace;
}

TraceReport verify_trace(const ExecutionTrace& trace, const Timeline& timeline, double epsilon_ms) {
  if (std::isnan(epsilon_ms) || epsilon_ms < 0.0) throw Error(ErrorCode::precondition, "epsilon must be >= 0");
  std::map<std::string, const ChannelEvent*> expected;
  for (const auto* e : timeline.events()) expected[e->id] = e;
  if (trace.records.size() != expected.size()) {
    throw Error(ErrorCode::invalid_input, "trace has " + std::to_string(trace.records.size()) +
                                              " records, timeline has " + std::to_string(expected.size()) + " events");
  }
  std::map<std::string, bool> seen;
  for (const auto& r : trace.records) {
    auto it = expected.find(r.event_id);
    if (it == expected.end() || seen[r.event_id] || it->second->channel != r.channel ||
        it->second->start_ms != r.scheduled_start || it->second->end_ms != r.scheduled_end) {
      throw Error(ErrorCode::invalid_input, "trace record '" + r.event_id + "' does not match the timeline");
    }
    seen[r.event_id] = true;
  }

  TraceReport report;
  for (const auto& r : trace.records) {
    const auto ds = r.actual_start - r.scheduled_start;
    const auto de = r.actual_end - r.scheduled_end;
    if (static_cast<double>(std::abs(ds)) > epsilon_ms || static_cast<double>(std::abs(de)) > epsilon_ms) {
      report.findings.push_back({TraceFinding::Kind::deviation, {r.event_id}, ds, de,
                                 r.event_id + " deviates by " + std::to_string(ds) + " ms at start, " +
                                     std::to_string(de) + " ms at end"});
    }
  }
  for (int c = 0; c < 3; ++c) {
    std::vector<const TraceRecord*> recs;
    for (const auto& r : trace.records) {
      if (channel_rank(r.channel) == c) recs.push_back(&r);
    }
    std::sort(recs.begin(), recs.end(), [](const TraceRecord* a, const TraceRecord* b) {
      return a->actual_start != b->actual_start ? a->actual_start < b->actual_start : a->event_id < b->event_id;
    });
    const TraceRecord* reach = nullptr;
    for (const auto* r : recs) {
      if (reach != nullptr && r->actual_start < reach->actual_end) {
        report.findings.push_back({TraceFinding::Kind::overlap, {reach->event_id, r->event_id}, 0, 0,
                                   reach->event_id + " and " + r->event_id + " overlap on the " +
                                       std::string(to_string(r->channel)) + " channel"});
      }
      if (reach == nullptr || r->actual_end > reach->actual_end) reach = r;
    }
  }
  return report;
}

}  // namespace choreo
