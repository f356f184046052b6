#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "choreo/geometry.hpp"

namespace choreo {

enum class LearningCategory { how_it_works, operation, safety };

// McNeill's four gesture kinds.
enum class GestureKind { deictic, iconic, metaphoric, beat };

std::string_view to_string(LearningCategory category);
std::string_view to_string(GestureKind kind);
std::optional<LearningCategory> parse_learning_category(std::string_view text);
std::optional<GestureKind> parse_gesture_kind(std::string_view text);

struct LearningPoint {
  std::string id;
  std::string device_id;
  LearningCategory category = LearningCategory::how_it_works;
  std::string text;

  friend bool operator==(const LearningPoint&, const LearningPoint&) = default;
};

struct DeviceInfo {
  std::string id;
  std::string name;
  std::string description;
  geometry::Pose2 pose;
  geometry::Polygon footprint;

  friend bool operator==(const DeviceInfo&, const DeviceInfo&) = default;
};

struct PlacementSpec {
  enum class Kind { on_equipment, nearby_surface };
  Kind kind = Kind::on_equipment;
  std::string device_id;   // on_equipment
  std::string region;      // on_equipment, free-form label
  std::string surface_id;  // nearby_surface

  friend bool operator==(const PlacementSpec&, const PlacementSpec&) = default;
};

struct VisualAsset {
  std::string id;
  std::string image_ref;
  std::string description;
  std::string learning_point_id;
  PlacementSpec placement;
  int sequence_rank = 1;
  // Optional narration phrase the image explains. Used to anchor images of
  // a multi-image learning point to a sentence of the segment.
  std::string cue;

  friend bool operator==(const VisualAsset&, const VisualAsset&) = default;
};

struct GestureContext {
  std::string device_id;
  std::string learning_point_id;
  std::string narration;

  friend bool operator==(const GestureContext&, const GestureContext&) = default;
};

struct GestureUnit {
  std::string id;
  GestureKind kind = GestureKind::deictic;
  std::string motion_ref;
  std::int64_t duration_ms = 0;
  geometry::Pose2 robot_pose;
  std::string description;
  GestureContext context;

  friend bool operator==(const GestureUnit&, const GestureUnit&) = default;
};

// Wall-like projection surface: a vertical strip standing on the 2D base
// segment [start, end], spanning heights [z_min, z_max], facing `normal`.
struct Surface {
  std::string id;
  std::string device_id;  // set when the surface belongs to a device
  geometry::Vec2 start;
  geometry::Vec2 end;
  double z_min = 0.0;
  double z_max = 0.0;
  geometry::Vec2 normal;

  friend bool operator==(const Surface&, const Surface&) = default;
};

// Immutable after load. Collections are kept sorted by id so iteration is
// deterministic regardless of manifest order.
struct AssetLibrary {
  std::vector<LearningPoint> learning_points;
  std::vector<DeviceInfo> devices;
  std::vector<VisualAsset> visuals;
  std::vector<GestureUnit> gestures;
  std::vector<Surface> surfaces;

  const LearningPoint* find_learning_point(std::string_view id) const;
  const DeviceInfo* find_device(std::string_view id) const;
  const VisualAsset* find_visual(std::string_view id) const;
  const GestureUnit* find_gesture(std::string_view id) const;
  const Surface* find_surface(std::string_view id) const;

  // Learning points of one device, in library order.
  std::vector<const LearningPoint*> learning_points_of(std::string_view device_id) const;

  friend bool operator==(const AssetLibrary&, const AssetLibrary&) = default;
};

struct LoadIssue {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string code;  // missing_manifest, dangling_reference, duplicate_id, malformed_field, ...
  std::string file;
  std::string key_path;
  std::string message;
};

struct LoadResult {
  std::optional<AssetLibrary> library;  // set iff there are no errors
  std::vector<LoadIssue> issues;

  bool ok() const { return library.has_value(); }
  std::size_t error_count() const;
  std::size_t warning_count() const;
};

// Manifest file names inside a library directory.
inline constexpr std::string_view kLearningPointsManifest = "learning_points.json";
inline constexpr std::string_view kDevicesManifest = "devices.json";
inline constexpr std::string_view kVisualsManifest = "visuals.json";
inline constexpr std::string_view kGesturesManifest = "gestures.json";
inline constexpr std::string_view kSurfacesManifest = "surfaces.json";
inline constexpr std::string_view kLibrarySchemaVersion = "choreo.library/1";

LoadResult load_library(const std::filesystem::path& dir);

// Cross-collection checks on an in-memory library. load_library runs this
// after parsing; generators and tests use it directly.
std::vector<LoadIssue> check_integrity(const AssetLibrary& library);

// Assets linked to the learning point, by sequence_rank ascending.
// Throws Error(not_found) for an unknown learning point.
std::vector<VisualAsset> query_visuals(const AssetLibrary& library,
                                       std::string_view learning_point_id);

// Units whose context names both ids, sorted by unit id.
std::vector<GestureUnit> query_gestures(const AssetLibrary& library,
                                        std::string_view learning_point_id,
                                        std::string_view device_id);

}  // namespace choreo
