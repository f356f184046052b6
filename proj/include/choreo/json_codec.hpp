#pragma once

// JSON documents exchanged with files, clients and the HTTP API. Writers
// use ordered_json so emitted bytes are stable. Readers throw
// Error(invalid_input) naming the offending field.

#include <json.hpp>

#include "choreo/asset_model.hpp"
#include "choreo/placement.hpp"
#include "choreo/script_pipeline.hpp"
#include "choreo/simulator.hpp"
#include "choreo/timeline.hpp"

namespace choreo::codec {

using Json = nlohmann::ordered_json;

inline constexpr const char* kTimelineSchemaVersion = "choreo.timeline/1";
inline constexpr const char* kTraceSchemaVersion = "choreo.trace/1";
inline constexpr const char* kSceneSchemaVersion = "choreo.scene/1";
inline constexpr const char* kPlacementSchemaVersion = "choreo.placement/1";

Json to_json(geometry::Vec2 v);
Json to_json(geometry::Vec3 v);
Json to_json(const geometry::Pose2& pose);

Json to_json(const AnnotatedScript& script);
AnnotatedScript script_from_json(const Json& doc);
Json to_json(const GenerationRequest& request);

Json to_json(const Surface& surface);
Surface surface_from_json(const Json& doc);

Json to_json(const Scene& scene);
Scene scene_from_json(const Json& doc);

Json to_json(const PlacementResult& result);
PlacementResult placement_from_json(const Json& doc);

// The three timeline documents, in file order narration/visuals/gestures.
struct TimelineDocuments {
  Json narration;
  Json visuals;
  Json gestures;
};

TimelineDocuments to_documents(const Timeline& timeline);
Timeline timeline_from_documents(const TimelineDocuments& docs);

// Single-document view used by the HTTP API.
Json to_json(const Timeline& timeline);
Timeline timeline_from_json(const Json& doc);

Json to_json(const ExecutionTrace& trace);
ExecutionTrace trace_from_json(const Json& doc);

Json to_json(const ValidationReport& report);
Json to_json(const TraceReport& report);
Json to_json(const std::vector<LoadIssue>& issues);

}  // namespace choreo::codec
