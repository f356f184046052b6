#include "choreo/composer.hpp"

#include <algorithm>
#include <set>

namespace choreo {

int gesture_priority(GestureKind kind) {
  switch (kind) {
    case GestureKind::deictic: return 0;
    case GestureKind::iconic: return 1;
    case GestureKind::metaphoric: return 2;
    case GestureKind::beat: return 3;
  }
  return 4;
}

namespace {

Selection rule_based(const SpeechSegment& segment, std::vector<VisualAsset> visuals,
                     std::vector<GestureUnit> gestures, const ComposerOptions& options) {
  Selection sel;
  sel.segment_id = segment.id;
  sel.visuals = std::move(visuals);
  std::stable_sort(gestures.begin(), gestures.end(), [](const GestureUnit& a, const GestureUnit& b) {
    return gesture_priority(a.kind) < gesture_priority(b.kind);
  });
  const auto keep = static_cast<std::size_t>(std::max(0, options.max_gestures_per_segment));
  if (gestures.size() > keep) gestures.resize(keep);
  sel.gestures = std::move(gestures);
  sel.rationale = std::to_string(sel.visuals.size()) + " visual(s) by rank, " +
                  std::to_string(sel.gestures.size()) + " gesture(s) by kind priority";
  return sel;
}

[[noreturn]] void reject(const SpeechSegment& segment, const std::string& what) {
  throw Error(ErrorCode::invalid_input, "composer proposal for " + segment.id + " rejected: " + what);
}

// Replaces proposed assets by their library records so a client cannot
// smuggle altered metadata (durations, refs) into the timeline.
Selection revalidate(const SpeechSegment& segment, const AssetLibrary& library, const Selection& proposal) {
  const auto& lp = *segment.learning_point_id;
  Selection sel;
  sel.segment_id = segment.id;
  sel.rationale = proposal.rationale;
  std::set<std::string> seen;
  for (const auto& v : proposal.visuals) {
    const auto* rec = library.find_visual(v.id);
    if (rec == nullptr) reject(segment, "unknown visual '" + v.id + "'");
    if (rec->learning_point_id != lp) {
      reject(segment, "visual '" + v.id + "' is not linked to learning point '" + lp + "'");
    }
    if (!seen.insert(v.id).second) reject(segment, "visual '" + v.id + "' repeated");
    sel.visuals.push_back(*rec);
  }
  seen.clear();
  for (const auto& g : proposal.gestures) {
    const auto* rec = library.find_gesture(g.id);
    if (rec == nullptr) reject(segment, "unknown gesture '" + g.id + "'");
    if (rec->context.learning_point_id != lp || rec->context.device_id != segment.device_id) {
      reject(segment, "gesture '" + g.id + "' is not linked to learning point '" + lp + "' on " +
                          segment.device_id);
    }
    if (!seen.insert(g.id).second) reject(segment, "gesture '" + g.id + "' repeated");
    sel.gestures.push_back(*rec);
  }
  return sel;
}

}  // namespace

Selection compose(const SpeechSegment& segment, const AssetLibrary& library, const ComposerOptions& options,
                  ComposerClient* client) {
  if (!segment.learning_point_id) {
    Selection empty;
    empty.segment_id = segment.id;
    empty.rationale = "no learning point";
    return empty;
  }
  auto visuals = query_visuals(library, *segment.learning_point_id);
  auto gestures = query_gestures(library, *segment.learning_point_id, segment.device_id);
  if (client == nullptr) return rule_based(segment, std::move(visuals), std::move(gestures), options);
  Selection proposal;
  try {
    proposal = client->propose(segment, visuals, gestures);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::client_failure, "composer client failed for " + segment.id + ": " + e.what());
  }
  return revalidate(segment, library, proposal);
}

}  // namespace choreo
