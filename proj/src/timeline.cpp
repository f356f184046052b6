#include "choreo/timeline.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace choreo {

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::speech: return "speech";
    case Channel::visual: return "visual";
    case Channel::gesture: return "gesture";
  }
  return "unknown";
}

std::string speech_event_id(std::string_view segment_id) { return "speech/" + std::string(segment_id); }

std::string visual_event_id(std::string_view segment_id, std::string_view asset_id) {
  return "visual/" + std::string(segment_id) + "/" + std::string(asset_id);
}

std::string gesture_event_id(std::string_view segment_id, std::string_view gesture_id) {
  return "gesture/" + std::string(segment_id) + "/" + std::string(gesture_id);
}

std::int64_t Timeline::end_ms() const {
  if (narration.empty()) return 0;
  return narration.back().end_ms + narration.back().pause_after_ms;
}

std::vector<const ChannelEvent*> Timeline::events() const {
  std::vector<const ChannelEvent*> out;
  out.reserve(narration.size() + visuals.size() + gestures.size());
  for (const auto& e : narration) out.push_back(&e);
  for (const auto& e : visuals) out.push_back(&e);
  for (const auto& e : gestures) out.push_back(&e);
  return out;
}

const ChannelEvent* Timeline::find(std::string_view event_id) const {
  for (const auto* e : events()) {
    if (e->id == event_id) return e;
  }
  return nullptr;
}

const NarrationEvent* Timeline::find_segment(std::string_view segment_id) const {
  for (const auto& e : narration) {
    if (e.segment_id == segment_id) return &e;
  }
  return nullptr;
}

ImageAnchors image_anchors(std::string_view segment_text, const std::vector<VisualAsset>& images,
                           std::string_view terminators) {
  const auto norm = text::normalize_whitespace(segment_text);
  const auto spans = text::split_sentences(norm, terminators);
  ImageAnchors out;
  out.denominator = text::char_count(norm) + 1;
  if (images.empty()) return out;
  const std::size_t last_sentence = spans.empty() ? 0 : spans.size() - 1;
  std::vector<std::string> lowered;
  for (const auto& s : spans) lowered.push_back(text::to_lower_ascii(norm.substr(s.begin, s.end - s.begin)));

  std::size_t prev = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::size_t index = 0;
    if (i > 0) {
      index = std::min(std::max(prev + 1, i), last_sentence);
      if (!images[i].cue.empty()) {
        const auto cue = text::to_lower_ascii(text::normalize_whitespace(images[i].cue));
        for (std::size_t s = prev + 1; s < spans.size(); ++s) {
          if (lowered[s].find(cue) != std::string::npos) {
            index = s;
            break;
          }
        }
      }
    }
    out.sentence_index.push_back(index);
    out.char_offset.push_back(spans.empty() ? 0 : text::char_count(norm.substr(0, spans[index].begin)));
    prev = index;
  }
  return out;
}

AlignResult align(const std::string& tour_id, const std::vector<SpeechSegment>& segments,
                  const std::vector<Selection>& selections, const AlignConfig& config) {
  if (config.base_pause_ms < 0) throw Error(ErrorCode::precondition, "base_pause_ms must be >= 0");
  std::map<std::string, const Selection*> by_segment;
  std::set<std::string> segment_ids;
  for (const auto& s : segments) segment_ids.insert(s.id);
  for (const auto& sel : selections) {
    if (segment_ids.count(sel.segment_id) == 0) {
      throw Error(ErrorCode::invalid_input, "selection for unknown segment '" + sel.segment_id + "'");
    }
    if (!by_segment.emplace(sel.segment_id, &sel).second) {
      throw Error(ErrorCode::invalid_input, "two selections for segment '" + sel.segment_id + "'");
    }
  }

  AlignResult result;
  Timeline& tl = result.timeline;
  tl.tour_id = tour_id;
  tl.base_pause_ms = config.base_pause_ms;
  std::int64_t clock = 0;
  int previous_order = 0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& seg = segments[k];
    if (seg.duration_ms <= 0) {
      throw Error(ErrorCode::invalid_input, "segment '" + seg.id + "' has zero duration");
    }
    if (k > 0 && seg.order_index <= previous_order) {
      throw Error(ErrorCode::invalid_input, "segments are not in increasing order_index");
    }
    previous_order = seg.order_index;
    const std::int64_t start = clock;
    const std::int64_t end = start + seg.duration_ms;

    NarrationEvent speech;
    speech.id = speech_event_id(seg.id);
    speech.channel = Channel::speech;
    speech.ref = seg.id;
    speech.segment_id = seg.id;
    speech.learning_point_id = seg.learning_point_id;
    speech.start_ms = start;
    speech.end_ms = end;
    speech.device_id = seg.device_id;
    speech.order_index = seg.order_index;
    speech.text = seg.text;
    speech.audio_ref = seg.audio_ref;

    const Selection* sel = nullptr;
    if (auto it = by_segment.find(seg.id); it != by_segment.end()) sel = it->second;

    std::int64_t gesture_total = 0;
    if (sel != nullptr) {
      const auto& images = sel->visuals;
      std::vector<std::int64_t> cuts;  // start of each image
      if (images.size() == 1) {
        cuts.push_back(start);
      } else if (images.size() > 1) {
        const auto anchors = image_anchors(seg.text, images, config.terminators);
        const auto denom = static_cast<std::int64_t>(anchors.denominator);
        bool increasing = true;
        for (std::size_t i = 0; i < images.size(); ++i) {
          const auto offset = static_cast<std::int64_t>(anchors.char_offset[i]);
          const std::int64_t at = i == 0 ? start : start + offset * seg.duration_ms / denom;
          if (i > 0 && at <= cuts.back()) increasing = false;
          cuts.push_back(at);
        }
        if (!increasing) {
          // Anchors collapsed onto one sentence: share the window evenly.
          const auto n = static_cast<std::int64_t>(images.size());
          if (seg.duration_ms < n) {
            throw Error(ErrorCode::invalid_input, "segment '" + seg.id + "' too short for " +
                                                      std::to_string(n) + " images");
          }
          for (std::int64_t i = 0; i < n; ++i) cuts[static_cast<std::size_t>(i)] = start + i * seg.duration_ms / n;
          result.warnings.push_back(seg.id + ": image anchors coincide; window split evenly");
        }
      }
      for (std::size_t i = 0; i < images.size(); ++i) {
        VisualEvent v;
        v.id = visual_event_id(seg.id, images[i].id);
        v.channel = Channel::visual;
        v.ref = images[i].id;
        v.segment_id = seg.id;
        v.learning_point_id = seg.learning_point_id;
        v.start_ms = cuts[i];
        v.end_ms = i + 1 < images.size() ? cuts[i + 1] : end;
        v.image_ref = images[i].image_ref;
        tl.visuals.push_back(std::move(v));
      }

      std::int64_t cursor = start;
      for (const auto& g : sel->gestures) {
        if (g.duration_ms <= 0) {
          throw Error(ErrorCode::invalid_input, "gesture '" + g.id + "' has non-positive duration");
        }
        GestureEvent ev;
        ev.id = gesture_event_id(seg.id, g.id);
        ev.channel = Channel::gesture;
        ev.ref = g.id;
        ev.segment_id = seg.id;
        ev.learning_point_id = seg.learning_point_id;
        ev.start_ms = cursor;
        ev.end_ms = cursor + g.duration_ms;
        ev.kind = g.kind;
        ev.motion_ref = g.motion_ref;
        ev.robot_pose = g.robot_pose;
        cursor = ev.end_ms;
        gesture_total += g.duration_ms;
        tl.gestures.push_back(std::move(ev));
      }
    }

    const std::int64_t overrun = std::max<std::int64_t>(0, gesture_total - seg.duration_ms);
    if (overrun > 0) {
      if (config.max_pause_extension_ms && overrun > *config.max_pause_extension_ms) {
        throw Error(ErrorCode::invalid_input, "gestures of '" + seg.id + "' overrun the segment by " +
                                                  std::to_string(overrun) + " ms, limit is " +
                                                  std::to_string(*config.max_pause_extension_ms));
      }
      result.warnings.push_back(seg.id + ": gestures overrun by " + std::to_string(overrun) +
                                " ms; pause extended");
    }
    speech.pause_after_ms = config.base_pause_ms + overrun;
    clock = end + speech.pause_after_ms;
    tl.narration.push_back(std::move(speech));
  }
  return result;
}

std::size_t ValidationReport::violation_count() const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Finding::Severity::violation;
  }));
}

std::size_t ValidationReport::warning_count() const { return findings.size() - violation_count(); }

std::vector<Finding> ValidationReport::with_code(std::string_view code) const {
  std::vector<Finding> out;
  for (const auto& f : findings) {
    if (f.code == code) out.push_back(f);
  }
  return out;
}

namespace {

class Checker {
 public:
  Checker(const Timeline& tl, const AssetLibrary* library) : tl_(tl), library_(library) {}

  ValidationReport run() {
    index_segments();
    check_basic_spans();
    check_speech();
    check_exclusivity(Channel::speech);
    check_exclusivity(Channel::visual);
    check_exclusivity(Channel::gesture);
    check_anchors();
    check_pause_law();
    check_visual_laws();
    check_coverage();
    return std::move(report_);
  }

 private:
  void violation(std::string code, std::vector<std::string> ids, std::string message) {
    report_.findings.push_back({Finding::Severity::violation, std::move(code), std::move(ids), {}, std::move(message)});
  }
  void warning(std::string code, std::vector<std::string> ids, std::string lp, std::string message) {
    report_.findings.push_back(
        {Finding::Severity::warning, std::move(code), std::move(ids), std::move(lp), std::move(message)});
  }

  void index_segments() {
    for (std::size_t k = 0; k < tl_.narration.size(); ++k) segment_index_[tl_.narration[k].segment_id] = k;
  }

  // End of the window an event of segment k must stay inside.
  std::int64_t window_end(std::size_t k) const {
    if (k + 1 < tl_.narration.size()) return tl_.narration[k + 1].start_ms;
    return tl_.narration[k].end_ms + tl_.narration[k].pause_after_ms;
  }

  void check_basic_spans() {
    std::set<std::string> ids;
    for (const auto* e : tl_.events()) {
      if (!ids.insert(e->id).second) violation("duplicate_id", {e->id}, "event id '" + e->id + "' repeats");
      if (e->start_ms < 0) violation("negative_time", {e->id}, e->id + " starts before the clock origin");
      if (e->start_ms >= e->end_ms) {
        violation("invalid_span", {e->id}, e->id + " has start_ms >= end_ms");
      }
    }
  }

  void check_speech() {
    if (tl_.narration.empty()) return;
    if (tl_.narration.front().start_ms != 0) {
      violation("clock_origin", {tl_.narration.front().id}, "first segment does not start at 0");
    }
    for (std::size_t k = 1; k < tl_.narration.size(); ++k) {
      const auto& prev = tl_.narration[k - 1];
      const auto& cur = tl_.narration[k];
      if (cur.order_index <= prev.order_index || cur.start_ms < prev.start_ms) {
        violation("speech_order", {prev.id, cur.id}, "speech events are not in order_index order");
      }
    }
  }

  void check_exclusivity(Channel channel) {
    std::vector<const ChannelEvent*> evs;
    for (const auto* e : tl_.events()) {
      if (e->channel == channel) evs.push_back(e);
    }
    std::sort(evs.begin(), evs.end(), [](const ChannelEvent* a, const ChannelEvent* b) {
      return a->start_ms != b->start_ms ? a->start_ms < b->start_ms : a->id < b->id;
    });
    const ChannelEvent* reach = nullptr;  // event with the latest end so far
    for (const auto* e : evs) {
      if (reach != nullptr && e->start_ms < reach->end_ms) {
        violation("channel_overlap", {reach->id, e->id},
                  std::string(to_string(channel)) + " events " + reach->id + " and " + e->id + " overlap");
      }
      if (reach == nullptr || e->end_ms > reach->end_ms) reach = e;
    }
  }

  void check_anchors() {
    auto check = [&](const ChannelEvent& e) {
      auto it = segment_index_.find(e.segment_id);
      if (it == segment_index_.end()) {
        violation("dangling_anchor", {e.id}, e.id + " cites unknown segment '" + e.segment_id + "'");
        return;
      }
      const auto& seg = tl_.narration[it->second];
      if (e.start_ms < seg.start_ms || e.end_ms > window_end(it->second)) {
        violation("anchor_containment", {e.id, seg.id},
                  e.id + " leaves the window of " + seg.segment_id + " [" + std::to_string(seg.start_ms) + ", " +
                      std::to_string(window_end(it->second)) + ")");
      }
    };
    for (const auto& e : tl_.visuals) check(e);
    for (const auto& e : tl_.gestures) check(e);
  }

  void check_pause_law() {
    std::map<std::string, std::int64_t> gesture_total;
    for (const auto& g : tl_.gestures) gesture_total[g.segment_id] += g.duration_ms();
    for (std::size_t k = 0; k < tl_.narration.size(); ++k) {
      const auto& seg = tl_.narration[k];
      const auto overrun = std::max<std::int64_t>(0, gesture_total[seg.segment_id] - seg.duration_ms());
      const auto expected = tl_.base_pause_ms + overrun + seg.manual_pause_ms;
      if (seg.pause_after_ms != expected) {
        violation("pause_law", {seg.id},
                  seg.segment_id + " pause_after_ms " + std::to_string(seg.pause_after_ms) + " != base " +
                      std::to_string(tl_.base_pause_ms) + " + overrun " + std::to_string(overrun) +
                      " + manual " + std::to_string(seg.manual_pause_ms));
      }
      if (seg.pause_after_ms < 0) violation("pause_law", {seg.id}, seg.segment_id + " has a negative pause");
      if (k + 1 < tl_.narration.size()) {
        const auto gap = tl_.narration[k + 1].start_ms - seg.end_ms;
        if (gap != seg.pause_after_ms) {
          violation("pause_ledger", {seg.id, tl_.narration[k + 1].id},
                    "gap after " + seg.segment_id + " is " + std::to_string(gap) + " ms, ledger says " +
                        std::to_string(seg.pause_after_ms));
        }
      }
    }
  }

  void check_visual_laws() {
    std::map<std::string, std::vector<const VisualEvent*>> per_segment;
    for (const auto& v : tl_.visuals) per_segment[v.segment_id].push_back(&v);
    for (auto& [segment_id, evs] : per_segment) {
      auto it = segment_index_.find(segment_id);
      if (it == segment_index_.end()) continue;
      const auto& seg = tl_.narration[it->second];
      auto nominal_start = [](const VisualEvent* v) { return v->start_ms - v->nudge_ms; };
      auto nominal_end = [](const VisualEvent* v) { return v->end_ms - v->nudge_ms; };
      if (evs.size() == 1) {
        if (nominal_start(evs[0]) != seg.start_ms || nominal_end(evs[0]) != seg.end_ms) {
          violation("visual_span", {evs[0]->id, seg.id},
                    evs[0]->id + " does not span its whole segment " + seg.segment_id);
        }
        continue;
      }
      std::sort(evs.begin(), evs.end(), [&](const VisualEvent* a, const VisualEvent* b) {
        return nominal_start(a) != nominal_start(b) ? nominal_start(a) < nominal_start(b) : a->id < b->id;
      });
      bool ok = nominal_start(evs.front()) == seg.start_ms && nominal_end(evs.back()) == seg.end_ms;
      for (std::size_t i = 1; ok && i < evs.size(); ++i) ok = nominal_end(evs[i - 1]) == nominal_start(evs[i]);
      if (!ok) {
        std::vector<std::string> ids;
        for (const auto* v : evs) ids.push_back(v->id);
        violation("visual_partition", std::move(ids),
                  "images of " + seg.segment_id + " do not partition the segment window");
      }
    }
  }

  void check_coverage() {
    std::set<std::string> with_visual;
    std::set<std::string> with_any;
    for (const auto& v : tl_.visuals) {
      with_visual.insert(v.segment_id);
      with_any.insert(v.segment_id);
    }
    for (const auto& g : tl_.gestures) with_any.insert(g.segment_id);
    for (const auto& seg : tl_.narration) {
      if (!seg.learning_point_id) continue;
      const auto& lp = *seg.learning_point_id;
      if (with_visual.count(seg.segment_id) == 0) {
        warning("coverage_no_visual", {seg.id}, lp,
                "learning point '" + lp + "' is narrated in " + seg.segment_id + " without any visual");
      }
      if (library_ == nullptr || with_any.count(seg.segment_id) != 0) continue;
      if (library_->find_learning_point(lp) == nullptr || library_->find_device(seg.device_id) == nullptr) continue;
      if (!query_visuals(*library_, lp).empty() || !query_gestures(*library_, lp, seg.device_id).empty()) {
        warning("coverage_unselected", {seg.id}, lp,
                "learning point '" + lp + "' has library assets but nothing was selected in " + seg.segment_id);
      }
    }
  }

  const Timeline& tl_;
  const AssetLibrary* library_;
  std::map<std::string, std::size_t> segment_index_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_timeline(const Timeline& timeline, const AssetLibrary* library) {
  return Checker(timeline, library).run();
}

Timeline apply_nudge(const Timeline& timeline, std::string_view event_id, std::int64_t delta_ms) {
  if (delta_ms > kMaxNudgeMs || delta_ms < -kMaxNudgeMs) {
    throw Error(ErrorCode::precondition,
                "nudge of " + std::to_string(delta_ms) + " ms exceeds the " + std::to_string(kMaxNudgeMs) + " ms bound");
  }
  Timeline out = timeline;
  auto shift = [delta_ms](ChannelEvent& e) {
    e.start_ms += delta_ms;
    e.end_ms += delta_ms;
  };
  for (auto& v : out.visuals) {
    if (v.id == event_id) {
      shift(v);
      v.nudge_ms += delta_ms;
      return out;
    }
  }
  for (auto& g : out.gestures) {
    if (g.id == event_id) {
      shift(g);
      g.nudge_ms += delta_ms;
      return out;
    }
  }
  for (std::size_t k = 0; k < out.narration.size(); ++k) {
    if (out.narration[k].id != event_id) continue;
    if (k == 0) throw Error(ErrorCode::precondition, "the first segment anchors the clock origin");
    auto& prev = out.narration[k - 1];
    prev.pause_after_ms += delta_ms;
    prev.manual_pause_ms += delta_ms;
    std::set<std::string> moved;
    for (std::size_t j = k; j < out.narration.size(); ++j) {
      shift(out.narration[j]);
      moved.insert(out.narration[j].segment_id);
    }
    for (auto& v : out.visuals) {
      if (moved.count(v.segment_id) != 0) shift(v);
    }
    for (auto& g : out.gestures) {
      if (moved.count(g.segment_id) != 0) shift(g);
    }
    return out;
  }
  throw Error(ErrorCode::not_found, "unknown event '" + std::string(event_id) + "'");
}

}  // namespace choreo
