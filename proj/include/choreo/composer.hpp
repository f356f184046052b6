#pragma once

#include <string>
#include <vector>

#include "choreo/asset_model.hpp"
#include "choreo/script_pipeline.hpp"

namespace choreo {

struct Selection {
  std::string segment_id;
  std::vector<VisualAsset> visuals;   // display order
  std::vector<GestureUnit> gestures;  // playback order
  std::string rationale;

  friend bool operator==(const Selection&, const Selection&) = default;
};

struct ComposerOptions {
  int max_gestures_per_segment = 1;
};

// External composition step (e.g. a language-model service). Receives the
// library candidates for the segment's learning point and returns its pick.
class ComposerClient {
 public:
  virtual ~ComposerClient() = default;
  virtual Selection propose(const SpeechSegment& segment, const std::vector<VisualAsset>& visuals,
                            const std::vector<GestureUnit>& gestures) = 0;
};

// Gesture kinds in selection priority order.
int gesture_priority(GestureKind kind);

// Rule-based selection, or the client's proposal after re-validation.
// Segments without a learning point get an empty selection. Throws
// Error(invalid_input) when a proposal cites assets that are unknown, not
// linked to the segment's learning point (and device, for gestures) or
// repeated.
Selection compose(const SpeechSegment& segment, const AssetLibrary& library,
                  const ComposerOptions& options = {}, ComposerClient* client = nullptr);

}  // namespace choreo
