#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "choreo/clients.hpp"
#include "choreo/config.hpp"
#include "choreo/timeline.hpp"

namespace choreo {

// Where robot and learners stand while a device is presented. Used to
// solve projection placement for that device's visuals.
struct Staging {
  geometry::Pose2 robot;
  double projector_height_m = 1.2;
  std::vector<geometry::Vec2> learners;
  double eye_height_m = 1.6;
  double referent_height_m = 1.0;

  friend bool operator==(const Staging&, const Staging&) = default;
};

struct TourSpec {
  TourPlan plan;
  std::map<std::string, Staging> staging;  // by device id, optional

  friend bool operator==(const TourSpec&, const TourSpec&) = default;
};

inline constexpr const char* kTourSchemaVersion = "choreo.tour/1";

TourSpec tour_from_json(const nlohmann::json& doc);
TourSpec load_tour(const std::filesystem::path& file);

// Scene for one visual: staging of its device, the device as referent,
// other device footprints as obstacles, and the candidate surfaces named by
// the visual's placement spec. nullopt when the tour has no staging for the
// device or the spec yields no surface.
std::optional<Scene> build_scene(const AssetLibrary& library, const TourSpec& tour, const std::string& device_id,
                                 const PlacementSpec& placement);

// Failure of one pipeline stage (generate, select, segment, synthesize,
// compose, align, validate).
class CompileError : public Error {
 public:
  CompileError(std::string stage, ErrorCode code, const std::string& message)
      : Error(code, "[" + stage + "] " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct DeviceDuration {
  std::string device_id;
  std::int64_t duration_ms = 0;  // segments plus their trailing pauses
};

struct CompileResult {
  Timeline timeline;
  std::vector<AnnotatedScript> variants;
  std::string selected_variant;
  std::vector<SpeechSegment> segments;
  std::vector<Selection> selections;
  ValidationReport report;
  std::vector<std::string> diagnostics;
  std::vector<DeviceDuration> device_durations;
};

// generate -> segment -> synthesize -> compose -> align (+ placement) ->
// validate. The variant is `variant`, else the tour's, else the first one
// generated.
CompileResult compile_tour(const AssetLibrary& library, const TourSpec& tour, const Config& config,
                           Clients& clients, const std::optional<std::string>& variant = std::nullopt);

nlohmann::ordered_json compile_summary(const CompileResult& result);

}  // namespace choreo
