#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "choreo/asset_model.hpp"
#include "choreo/error.hpp"
#include "choreo/text.hpp"

namespace choreo {

// Teaching goal: which equipment to cover and in what order.
struct TourPlan {
  std::string tour_id;
  std::vector<std::string> device_ids;
  std::optional<std::string> variant;

  friend bool operator==(const TourPlan&, const TourPlan&) = default;
};

// Throws Error(invalid_input) for an empty plan, unknown or repeated devices.
void validate_tour(const TourPlan& plan, const AssetLibrary& library);

// One narration block. When `learning_point_id` is set the block marks
// where that learning point is explained; `marked_text` narrows the marker
// to the sentences containing that phrase (whole block when empty).
struct NarrationBlock {
  std::string text;
  std::optional<std::string> learning_point_id;
  std::string marked_text;

  friend bool operator==(const NarrationBlock&, const NarrationBlock&) = default;
};

struct DeviceNarration {
  std::string device_id;
  std::vector<NarrationBlock> blocks;

  friend bool operator==(const DeviceNarration&, const DeviceNarration&) = default;
};

struct AnnotatedScript {
  std::string variant_label;
  std::vector<DeviceNarration> devices;

  // All block texts joined with single spaces, whitespace-normalized.
  std::string full_text() const;

  friend bool operator==(const AnnotatedScript&, const AnnotatedScript&) = default;
};

struct NarrationTechniques {
  // "{current}" and "{next}" are replaced by device names.
  std::vector<std::string> transition_phrases;
  std::vector<std::string> analogy_hints;
  double target_minutes_min = 4.0;
  double target_minutes_max = 5.0;

  friend bool operator==(const NarrationTechniques&, const NarrationTechniques&) = default;
};

struct GenerationRequest {
  TourPlan tour;
  std::vector<DeviceInfo> devices;               // in tour order
  std::vector<LearningPoint> learning_points;    // of the toured devices
  NarrationTechniques techniques;

  friend bool operator==(const GenerationRequest&, const GenerationRequest&) = default;
};

GenerationRequest make_generation_request(const TourPlan& plan, const AssetLibrary& library,
                                          NarrationTechniques techniques = {});

// Problems that make a script unusable for this request (empty when valid).
std::vector<std::string> validate_script(const AnnotatedScript& script,
                                         const GenerationRequest& request);

class TextGenClient {
 public:
  virtual ~TextGenClient() = default;
  virtual std::vector<AnnotatedScript> generate(const GenerationRequest& request, int n_variants) = 0;
};

// Deterministic template generator. For each device, in tour order: one
// block per learning point (library order, rotated by the variant index)
// whose text is the learning point statement and which is marked with it;
// then one unmarked transition block. Variants are labelled v1, v2, ...
class StubTextGenClient final : public TextGenClient {
 public:
  std::vector<AnnotatedScript> generate(const GenerationRequest& request, int n_variants) override;
};

std::vector<std::string> default_transition_phrases();

struct GenerationOutcome {
  std::vector<AnnotatedScript> scripts;
  std::vector<std::string> diagnostics;  // one per rejected variant
};

// Throws Error(precondition) when n_variants < 1, Error(client_failure)
// when the client throws or no variant survives validation.
GenerationOutcome generate_script(const GenerationRequest& request, TextGenClient& client,
                                  int n_variants);

struct SpeechSegment {
  std::string id;
  std::string device_id;
  int order_index = 0;
  std::string text;
  std::string audio_ref;
  std::int64_t duration_ms = 0;
  std::optional<std::string> learning_point_id;

  friend bool operator==(const SpeechSegment&, const SpeechSegment&) = default;
};

struct SegmentationOptions {
  std::string terminators{text::kDefaultTerminators};
};

// Sentence-boundary segmentation. A marked block yields one segment with
// the marker (its marked sentences) plus at most one unmarked segment
// before and after it; an unmarked block yields one segment. Segment ids
// are seg-001, seg-002, ... in tour order.
std::vector<SpeechSegment> segment_script(const AnnotatedScript& script, const AssetLibrary& library,
                                          const SegmentationOptions& options = {});

struct SpeechAudio {
  std::string audio_ref;
  std::int64_t duration_ms = 0;
};

class SpeechClient {
 public:
  virtual ~SpeechClient() = default;
  // Implementations must be safe to call from several threads.
  virtual SpeechAudio synthesize(std::string_view text) = 0;
};

// duration_ms = ceil(char_count / rate * 1000); audio_ref derives from a
// hash of the text.
class StubSpeechClient final : public SpeechClient {
 public:
  explicit StubSpeechClient(double rate_chars_per_sec = 5.0);
  SpeechAudio synthesize(std::string_view text) override;
  double rate() const { return rate_; }

 private:
  double rate_;
};

struct SynthesisOptions {
  int max_concurrency = 1;
};

// Thrown when any segment fails; lists the segments that did succeed.
class SynthesisError : public Error {
 public:
  SynthesisError(const std::string& message, std::string failed_segment,
                 std::vector<std::string> completed)
      : Error(ErrorCode::client_failure, message),
        failed_segment_(std::move(failed_segment)),
        completed_(std::move(completed)) {}

  const std::string& failed_segment() const { return failed_segment_; }
  const std::vector<std::string>& completed() const { return completed_; }

 private:
  std::string failed_segment_;
  std::vector<std::string> completed_;
};

std::vector<SpeechSegment> synthesize(std::vector<SpeechSegment> segments, SpeechClient& client,
                                      const SynthesisOptions& options = {});

}  // namespace choreo
