#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "choreo/asset_model.hpp"
#include "choreo/composer.hpp"
#include "choreo/placement.hpp"
#include "choreo/script_pipeline.hpp"

namespace choreo {

enum class Channel { speech, visual, gesture };

std::string_view to_string(Channel channel);

// Timed event on the tour clock (integer milliseconds, origin 0).
struct ChannelEvent {
  std::string id;
  Channel channel = Channel::speech;
  std::string ref;         // segment, visual asset or gesture unit id
  std::string segment_id;  // speech segment whose window anchors the event
  std::optional<std::string> learning_point_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  // Accumulated manual offset applied on top of the compiled position.
  std::int64_t nudge_ms = 0;

  std::int64_t duration_ms() const { return end_ms - start_ms; }

  friend bool operator==(const ChannelEvent&, const ChannelEvent&) = default;
};

struct NarrationEvent : ChannelEvent {
  std::string device_id;
  int order_index = 0;
  std::string text;
  std::string audio_ref;
  // Silence after this segment. Compiled value is base + gesture overrun;
  // manual_pause_ms is the part added by nudges.
  std::int64_t pause_after_ms = 0;
  std::int64_t manual_pause_ms = 0;

  friend bool operator==(const NarrationEvent&, const NarrationEvent&) = default;
};

struct VisualEvent : ChannelEvent {
  std::string image_ref;
  std::optional<PlacementResult> placement;
  std::string placement_error;

  friend bool operator==(const VisualEvent&, const VisualEvent&) = default;
};

struct GestureEvent : ChannelEvent {
  GestureKind kind = GestureKind::deictic;
  std::string motion_ref;
  geometry::Pose2 robot_pose;

  friend bool operator==(const GestureEvent&, const GestureEvent&) = default;
};

struct Timeline {
  std::string tour_id;
  std::string variant;
  std::int64_t base_pause_ms = 500;
  std::vector<NarrationEvent> narration;
  std::vector<VisualEvent> visuals;
  std::vector<GestureEvent> gestures;

  // End of the last segment plus its trailing pause; 0 when empty.
  std::int64_t end_ms() const;

  std::vector<const ChannelEvent*> events() const;
  const ChannelEvent* find(std::string_view event_id) const;
  const NarrationEvent* find_segment(std::string_view segment_id) const;

  friend bool operator==(const Timeline&, const Timeline&) = default;
};

std::string speech_event_id(std::string_view segment_id);
std::string visual_event_id(std::string_view segment_id, std::string_view asset_id);
std::string gesture_event_id(std::string_view segment_id, std::string_view gesture_id);

struct AlignConfig {
  std::int64_t base_pause_ms = 500;
  // Unset: gesture overruns only produce warnings.
  std::optional<std::int64_t> max_pause_extension_ms;
  std::string terminators{text::kDefaultTerminators};
};

struct AlignResult {
  Timeline timeline;
  std::vector<std::string> warnings;
};

// Position, within a segment text, where each image of a multi-image
// selection takes over: the first image starts at 0; image i is anchored
// to the sentence containing its cue (searching forward from the previous
// anchor), or to sentence i when it has no cue or the cue is absent.
// Offsets are code-point offsets of sentence starts; the denominator counts
// every sentence with one trailing separator (normalized length + 1).
struct ImageAnchors {
  std::vector<std::size_t> sentence_index;
  std::vector<std::size_t> char_offset;
  std::size_t denominator = 1;
};

ImageAnchors image_anchors(std::string_view segment_text, const std::vector<VisualAsset>& images,
                           std::string_view terminators = text::kDefaultTerminators);

// Places speech back to back with pauses, spans visuals over their segment
// (split at image anchors for multi-image selections), chains gestures from
// segment start and widens the following pause by any gesture overrun.
// `selections` is matched to segments by segment id. Throws
// Error(invalid_input) on zero-duration segments, unknown selection
// segments, or an overrun beyond max_pause_extension_ms.
AlignResult align(const std::string& tour_id, const std::vector<SpeechSegment>& segments,
                  const std::vector<Selection>& selections, const AlignConfig& config = {});

struct Finding {
  enum class Severity { violation, warning };
  Severity severity = Severity::violation;
  std::string code;
  std::vector<std::string> event_ids;
  std::string learning_point_id;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  std::size_t violation_count() const;
  std::size_t warning_count() const;
  bool clean() const { return violation_count() == 0; }
  std::vector<Finding> with_code(std::string_view code) const;
};

// Independent checker of the alignment contract. Laws are checked on
// compiled positions (start - nudge_ms); exclusivity and containment on
// actual positions. Coverage warnings that need library matches are only
// produced when `library` is given.
ValidationReport validate_timeline(const Timeline& timeline, const AssetLibrary* library = nullptr);

inline constexpr std::int64_t kMaxNudgeMs = 5000;

// Applies a manual offset to one event. Speech nudges move that segment and
// everything after it and are booked as manual pause on the previous
// segment; visual and gesture nudges move only the event. Throws
// Error(not_found) for unknown ids and Error(precondition) for
// |delta| > kMaxNudgeMs or a nudge of the first speech segment. The result
// is not validated.
Timeline apply_nudge(const Timeline& timeline, std::string_view event_id, std::int64_t delta_ms);

}  // namespace choreo
