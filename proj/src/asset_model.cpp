#include "choreo/asset_model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "choreo/error.hpp"
#include "manifest_reader.hpp"

namespace choreo {

using nlohmann::json;

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::client_failure: return "client_failure";
    case ErrorCode::io: return "io";
    case ErrorCode::infeasible: return "infeasible";
  }
  return "unknown";
}

std::string_view to_string(LearningCategory category) {
  switch (category) {
    case LearningCategory::how_it_works: return "how_it_works";
    case LearningCategory::operation: return "operation";
    case LearningCategory::safety: return "safety";
  }
  return "unknown";
}

std::string_view to_string(GestureKind kind) {
  switch (kind) {
    case GestureKind::deictic: return "deictic";
    case GestureKind::iconic: return "iconic";
    case GestureKind::metaphoric: return "metaphoric";
    case GestureKind::beat: return "beat";
  }
  return "unknown";
}

std::optional<LearningCategory> parse_learning_category(std::string_view text) {
  if (text == "how_it_works") return LearningCategory::how_it_works;
  if (text == "operation") return LearningCategory::operation;
  if (text == "safety") return LearningCategory::safety;
  return std::nullopt;
}

std::optional<GestureKind> parse_gesture_kind(std::string_view text) {
  if (text == "deictic") return GestureKind::deictic;
  if (text == "iconic") return GestureKind::iconic;
  if (text == "metaphoric") return GestureKind::metaphoric;
  if (text == "beat") return GestureKind::beat;
  return std::nullopt;
}

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::lower_bound(items.begin(), items.end(), id,
                             [](const T& item, std::string_view key) { return item.id < key; });
  if (it != items.end() && it->id == id) return &*it;
  // Libraries assembled in memory may not be sorted.
  auto lin = std::find_if(items.begin(), items.end(), [&](const T& item) { return item.id == id; });
  return lin == items.end() ? nullptr : &*lin;
}

template <typename T>
void sort_by_id(std::vector<T>& items) {
  std::sort(items.begin(), items.end(), [](const T& a, const T& b) { return a.id < b.id; });
}

std::string item_path(std::string_view collection, std::size_t index) {
  return "/" + std::string(collection) + "/" + std::to_string(index);
}

// Reads one manifest and returns its item array, or nullptr after recording
// why it could not be used.
std::optional<json> read_manifest(const std::filesystem::path& dir, std::string_view name,
                                  const char* collection, std::vector<LoadIssue>& issues) {
  const auto path = dir / name;
  detail::ManifestReader reader(std::string(name), issues);
  if (!std::filesystem::is_regular_file(path)) {
    reader.error("missing_manifest", "", "missing manifest " + std::string(name));
    return std::nullopt;
  }
  std::ifstream in(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    reader.error("malformed_field", "", std::string("invalid JSON: ") + e.what());
    return std::nullopt;
  }
  if (!doc.is_object()) {
    reader.error("malformed_field", "", "manifest must be a JSON object");
    return std::nullopt;
  }
  auto version = reader.string(doc, "", "schema_version");
  if (!version.empty() && version != kLibrarySchemaVersion) {
    reader.error("malformed_field", "/schema_version",
                 "unsupported schema version '" + version + "'");
  }
  auto it = doc.find(collection);
  if (it == doc.end() || !it->is_array()) {
    reader.error("malformed_field", std::string("/") + collection, "expected an array");
    return std::nullopt;
  }
  return *it;
}

class Loader {
 public:
  explicit Loader(std::vector<LoadIssue>& issues) : issues_(issues) {}

  void learning_points(const json& items, AssetLibrary& lib) {
    detail::ManifestReader r(std::string(kLearningPointsManifest), issues_);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto path = item_path("learning_points", i);
      const auto before = issues_.size();
      const json& item = items[i];
      if (!item.is_object()) {
        r.error("malformed_field", path, "expected an object");
        continue;
      }
      LearningPoint lp;
      lp.id = r.string(item, path, "id");
      lp.device_id = r.string(item, path, "device_id");
      auto category = r.string(item, path, "category");
      if (!category.empty()) {
        if (auto c = parse_learning_category(category)) {
          lp.category = *c;
        } else {
          r.error("malformed_field", path + "/category",
                  "category must be one of how_it_works, operation, safety");
        }
      }
      lp.text = r.string(item, path, "text");
      if (!lp.id.empty() && !seen.insert(lp.id).second) {
        r.error("duplicate_id", path + "/id", "duplicate learning point id '" + lp.id + "'");
      }
      if (issues_.size() == before) {
        lib.learning_points.push_back(std::move(lp));
        lp_paths_.push_back(path);
      } else if (!lp.id.empty()) {
        rejected_ids_.insert(lp.id);
      }
    }
  }

  void devices(const json& items, AssetLibrary& lib) {
    detail::ManifestReader r(std::string(kDevicesManifest), issues_);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto path = item_path("devices", i);
      const auto before = issues_.size();
      const json& item = items[i];
      if (!item.is_object()) {
        r.error("malformed_field", path, "expected an object");
        continue;
      }
      DeviceInfo dev;
      dev.id = r.string(item, path, "id");
      dev.name = r.string(item, path, "name");
      dev.description = r.string(item, path, "description", false, false);
      if (auto p = r.pose(item, path, "pose")) dev.pose = *p;
      if (const auto* fp = r.field(item, path, "footprint")) {
        if (!fp->is_array()) {
          r.error("malformed_field", path + "/footprint", "expected an array of [x, y]");
        } else {
          for (std::size_t k = 0; k < fp->size(); ++k) {
            if (auto v = r.point((*fp)[k], path + "/footprint/" + std::to_string(k))) {
              dev.footprint.push_back(*v);
            }
          }
          if (dev.footprint.size() == fp->size()) {
            if (dev.footprint.size() < 3) {
              r.error("malformed_field", path + "/footprint", "footprint needs at least 3 vertices");
            } else if (!geometry::is_simple(dev.footprint)) {
              r.error("malformed_field", path + "/footprint", "footprint is self-intersecting");
            }
          }
        }
      }
      if (!dev.id.empty() && !seen.insert(dev.id).second) {
        r.error("duplicate_id", path + "/id", "duplicate device id '" + dev.id + "'");
      }
      if (issues_.size() == before) {
        lib.devices.push_back(std::move(dev));
      } else if (!dev.id.empty()) {
        rejected_ids_.insert(dev.id);
      }
    }
  }

  void visuals(const json& items, AssetLibrary& lib) {
    detail::ManifestReader r(std::string(kVisualsManifest), issues_);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto path = item_path("visuals", i);
      const auto before = issues_.size();
      const json& item = items[i];
      if (!item.is_object()) {
        r.error("malformed_field", path, "expected an object");
        continue;
      }
      VisualAsset v;
      v.id = r.string(item, path, "id");
      v.image_ref = r.media_ref(item, path, "image_ref");
      v.description = r.string(item, path, "description");
      v.learning_point_id = r.string(item, path, "learning_point_id");
      v.cue = r.string(item, path, "cue", false, false);
      if (auto rank = r.integer(item, path, "sequence_rank", false)) {
        if (*rank < 1) r.error("malformed_field", path + "/sequence_rank", "rank must be >= 1");
        v.sequence_rank = static_cast<int>(*rank);
      }
      if (const auto* pl = r.field(item, path, "placement")) {
        const auto sub = path + "/placement";
        if (!pl->is_object()) {
          r.error("malformed_field", sub, "expected an object");
        } else {
          auto kind = r.string(*pl, sub, "kind");
          if (kind == "on_equipment") {
            v.placement.kind = PlacementSpec::Kind::on_equipment;
            v.placement.device_id = r.string(*pl, sub, "device_id");
            v.placement.region = r.string(*pl, sub, "region", false, false);
          } else if (kind == "nearby_surface") {
            v.placement.kind = PlacementSpec::Kind::nearby_surface;
            v.placement.surface_id = r.string(*pl, sub, "surface_id");
          } else if (!kind.empty()) {
            r.error("malformed_field", sub + "/kind", "kind must be on_equipment or nearby_surface");
          }
        }
      }
      if (!v.id.empty() && !seen.insert(v.id).second) {
        r.error("duplicate_id", path + "/id", "duplicate visual asset id '" + v.id + "'");
      }
      if (issues_.size() == before) {
        lib.visuals.push_back(std::move(v));
        visual_paths_.push_back(path);
      } else if (!v.id.empty()) {
        rejected_ids_.insert(v.id);
      }
    }
  }

  void gestures(const json& items, AssetLibrary& lib) {
    detail::ManifestReader r(std::string(kGesturesManifest), issues_);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto path = item_path("gestures", i);
      const auto before = issues_.size();
      const json& item = items[i];
      if (!item.is_object()) {
        r.error("malformed_field", path, "expected an object");
        continue;
      }
      GestureUnit g;
      g.id = r.string(item, path, "id");
      auto kind = r.string(item, path, "kind");
      if (!kind.empty()) {
        if (auto k = parse_gesture_kind(kind)) {
          g.kind = *k;
        } else {
          r.error("malformed_field", path + "/kind",
                  "kind must be one of deictic, iconic, metaphoric, beat");
        }
      }
      g.motion_ref = r.media_ref(item, path, "motion_ref");
      if (auto d = r.integer(item, path, "duration_ms")) {
        if (*d <= 0) r.error("malformed_field", path + "/duration_ms", "duration_ms must be positive");
        g.duration_ms = *d;
      }
      if (auto p = r.pose(item, path, "robot_pose")) g.robot_pose = *p;
      g.description = r.string(item, path, "description", false, false);
      if (const auto* ctx = r.field(item, path, "context")) {
        const auto sub = path + "/context";
        if (!ctx->is_object()) {
          r.error("malformed_field", sub, "expected an object");
        } else {
          g.context.device_id = r.string(*ctx, sub, "device_id");
          g.context.learning_point_id = r.string(*ctx, sub, "learning_point_id");
          g.context.narration = r.string(*ctx, sub, "narration", false, false);
        }
      }
      if (!g.id.empty() && !seen.insert(g.id).second) {
        r.error("duplicate_id", path + "/id", "duplicate gesture id '" + g.id + "'");
      }
      if (issues_.size() == before) {
        lib.gestures.push_back(std::move(g));
        gesture_paths_.push_back(path);
      } else if (!g.id.empty()) {
        rejected_ids_.insert(g.id);
      }
    }
  }

  void surfaces(const json& items, AssetLibrary& lib) {
    detail::ManifestReader r(std::string(kSurfacesManifest), issues_);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto path = item_path("surfaces", i);
      const auto before = issues_.size();
      const json& item = items[i];
      if (!item.is_object()) {
        r.error("malformed_field", path, "expected an object");
        continue;
      }
      Surface s;
      s.id = r.string(item, path, "id");
      s.device_id = r.string(item, path, "device_id", false, false);
      auto a = r.point(item, path, "start");
      auto b = r.point(item, path, "end");
      auto zmin = r.number(item, path, "z_min");
      auto zmax = r.number(item, path, "z_max");
      auto n = r.point(item, path, "normal");
      if (a && b && zmin && zmax && n) {
        s.start = *a;
        s.end = *b;
        s.z_min = *zmin;
        s.z_max = *zmax;
        const double len = geometry::norm(*b - *a);
        const double nlen = geometry::norm(*n);
        if (len <= 0.0) r.error("malformed_field", path + "/end", "surface base segment has zero length");
        if (*zmin < 0.0 || *zmax <= *zmin) {
          r.error("malformed_field", path + "/z_max", "height range must satisfy 0 <= z_min < z_max");
        }
        if (nlen <= 0.0) {
          r.error("malformed_field", path + "/normal", "normal must be non-zero");
        } else {
          s.normal = *n * (1.0 / nlen);
          if (len > 0.0 && std::abs(geometry::dot(s.normal, (*b - *a) * (1.0 / len))) > 1e-6) {
            r.error("malformed_field", path + "/normal", "normal must be perpendicular to the base segment");
          }
        }
      }
      if (!s.id.empty() && !seen.insert(s.id).second) {
        r.error("duplicate_id", path + "/id", "duplicate surface id '" + s.id + "'");
      }
      if (issues_.size() == before) {
        lib.surfaces.push_back(std::move(s));
        surface_paths_.push_back(path);
      } else if (!s.id.empty()) {
        rejected_ids_.insert(s.id);
      }
    }
  }

  std::vector<std::string> lp_paths_;
  std::vector<std::string> visual_paths_;
  std::vector<std::string> gesture_paths_;
  std::vector<std::string> surface_paths_;
  // Records dropped for their own errors. References to them are not
  // reported again as dangling.
  std::set<std::string> rejected_ids_;

 private:
  std::vector<LoadIssue>& issues_;
};

void integrity(const AssetLibrary& lib, std::vector<LoadIssue>& issues,
               const std::vector<std::string>* lp_paths,
               const std::vector<std::string>* visual_paths,
               const std::vector<std::string>* gesture_paths,
               const std::vector<std::string>* surface_paths,
               const std::set<std::string>* rejected_ids) {
  auto path_of = [](const std::vector<std::string>* paths, std::string_view collection, std::size_t i) {
    return paths != nullptr ? (*paths)[i] : item_path(collection, i);
  };
  auto dangling = [&](std::string_view file, std::string path, std::string_view what,
                      const std::string& id) {
    if (rejected_ids != nullptr && rejected_ids->count(id) > 0) return;
    issues.push_back({LoadIssue::Severity::error, "dangling_reference", std::string(file),
                      std::move(path), "unknown " + std::string(what) + " '" + id + "'"});
  };

  for (std::size_t i = 0; i < lib.learning_points.size(); ++i) {
    const auto& lp = lib.learning_points[i];
    if (lib.find_device(lp.device_id) == nullptr) {
      dangling(kLearningPointsManifest, path_of(lp_paths, "learning_points", i) + "/device_id",
               "device", lp.device_id);
    }
  }

  std::map<std::string, std::set<int>> ranks;
  for (std::size_t i = 0; i < lib.visuals.size(); ++i) {
    const auto& v = lib.visuals[i];
    const auto path = path_of(visual_paths, "visuals", i);
    if (lib.find_learning_point(v.learning_point_id) == nullptr) {
      dangling(kVisualsManifest, path + "/learning_point_id", "learning point", v.learning_point_id);
    } else if (!ranks[v.learning_point_id].insert(v.sequence_rank).second) {
      issues.push_back({LoadIssue::Severity::error, "duplicate_rank", std::string(kVisualsManifest),
                        path + "/sequence_rank",
                        "sequence_rank " + std::to_string(v.sequence_rank) +
                            " repeats within learning point '" + v.learning_point_id + "'"});
    }
    if (v.placement.kind == PlacementSpec::Kind::on_equipment) {
      if (lib.find_device(v.placement.device_id) == nullptr) {
        dangling(kVisualsManifest, path + "/placement/device_id", "device", v.placement.device_id);
      }
    } else if (lib.find_surface(v.placement.surface_id) == nullptr) {
      dangling(kVisualsManifest, path + "/placement/surface_id", "surface", v.placement.surface_id);
    }
  }

  for (std::size_t i = 0; i < lib.gestures.size(); ++i) {
    const auto& g = lib.gestures[i];
    const auto path = path_of(gesture_paths, "gestures", i);
    const bool device_ok = lib.find_device(g.context.device_id) != nullptr;
    const auto* lp = lib.find_learning_point(g.context.learning_point_id);
    if (!device_ok) dangling(kGesturesManifest, path + "/context/device_id", "device", g.context.device_id);
    if (lp == nullptr) {
      dangling(kGesturesManifest, path + "/context/learning_point_id", "learning point",
               g.context.learning_point_id);
    } else if (device_ok && lp->device_id != g.context.device_id) {
      issues.push_back({LoadIssue::Severity::error, "inconsistent_reference",
                        std::string(kGesturesManifest), path + "/context",
                        "learning point '" + lp->id + "' belongs to device '" + lp->device_id +
                            "', not '" + g.context.device_id + "'"});
    }
  }

  for (std::size_t i = 0; i < lib.surfaces.size(); ++i) {
    const auto& s = lib.surfaces[i];
    if (!s.device_id.empty() && lib.find_device(s.device_id) == nullptr) {
      dangling(kSurfacesManifest, path_of(surface_paths, "surfaces", i) + "/device_id", "device",
               s.device_id);
    }
  }

  auto empty_warning = [&](bool empty, std::string_view file, const char* what) {
    if (empty) {
      issues.push_back({LoadIssue::Severity::warning, "empty_collection", std::string(file), "",
                        std::string("library has no ") + what});
    }
  };
  empty_warning(lib.learning_points.empty(), kLearningPointsManifest, "learning points");
  empty_warning(lib.devices.empty(), kDevicesManifest, "devices");
  empty_warning(lib.visuals.empty(), kVisualsManifest, "visual assets");
  empty_warning(lib.gestures.empty(), kGesturesManifest, "gesture units");
  empty_warning(lib.surfaces.empty(), kSurfacesManifest, "surfaces");
}

}  // namespace

const LearningPoint* AssetLibrary::find_learning_point(std::string_view id) const {
  return find_by_id(learning_points, id);
}
const DeviceInfo* AssetLibrary::find_device(std::string_view id) const { return find_by_id(devices, id); }
const VisualAsset* AssetLibrary::find_visual(std::string_view id) const { return find_by_id(visuals, id); }
const GestureUnit* AssetLibrary::find_gesture(std::string_view id) const { return find_by_id(gestures, id); }
const Surface* AssetLibrary::find_surface(std::string_view id) const { return find_by_id(surfaces, id); }

std::vector<const LearningPoint*> AssetLibrary::learning_points_of(std::string_view device_id) const {
  std::vector<const LearningPoint*> out;
  for (const auto& lp : learning_points) {
    if (lp.device_id == device_id) out.push_back(&lp);
  }
  return out;
}

std::size_t LoadResult::error_count() const {
  return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const LoadIssue& i) {
    return i.severity == LoadIssue::Severity::error;
  }));
}

std::size_t LoadResult::warning_count() const { return issues.size() - error_count(); }

std::vector<LoadIssue> check_integrity(const AssetLibrary& library) {
  std::vector<LoadIssue> issues;
  integrity(library, issues, nullptr, nullptr, nullptr, nullptr, nullptr);
  return issues;
}

LoadResult load_library(const std::filesystem::path& dir) {
  LoadResult result;
  if (!std::filesystem::is_directory(dir)) {
    result.issues.push_back({LoadIssue::Severity::error, "missing_directory", dir.string(), "",
                             "library directory does not exist"});
    return result;
  }

  AssetLibrary lib;
  Loader loader(result.issues);
  auto lps = read_manifest(dir, kLearningPointsManifest, "learning_points", result.issues);
  auto devs = read_manifest(dir, kDevicesManifest, "devices", result.issues);
  auto vis = read_manifest(dir, kVisualsManifest, "visuals", result.issues);
  auto ges = read_manifest(dir, kGesturesManifest, "gestures", result.issues);
  auto surf = read_manifest(dir, kSurfacesManifest, "surfaces", result.issues);
  if (result.error_count() > 0) return result;

  loader.learning_points(*lps, lib);
  loader.devices(*devs, lib);
  loader.visuals(*vis, lib);
  loader.gestures(*ges, lib);
  loader.surfaces(*surf, lib);

  integrity(lib, result.issues, &loader.lp_paths_, &loader.visual_paths_, &loader.gesture_paths_,
            &loader.surface_paths_, &loader.rejected_ids_);
  if (result.error_count() > 0) return result;

  sort_by_id(lib.learning_points);
  sort_by_id(lib.devices);
  sort_by_id(lib.visuals);
  sort_by_id(lib.gestures);
  sort_by_id(lib.surfaces);
  result.library = std::move(lib);
  return result;
}

std::vector<VisualAsset> query_visuals(const AssetLibrary& library, std::string_view learning_point_id) {
  if (library.find_learning_point(learning_point_id) == nullptr) {
    throw Error(ErrorCode::not_found, "unknown learning point '" + std::string(learning_point_id) + "'");
  }
  std::vector<VisualAsset> out;
  for (const auto& v : library.visuals) {
    if (v.learning_point_id == learning_point_id) out.push_back(v);
  }
  std::stable_sort(out.begin(), out.end(), [](const VisualAsset& a, const VisualAsset& b) {
    return a.sequence_rank < b.sequence_rank;
  });
  return out;
}

std::vector<GestureUnit> query_gestures(const AssetLibrary& library, std::string_view learning_point_id,
                                        std::string_view device_id) {
  if (library.find_learning_point(learning_point_id) == nullptr) {
    throw Error(ErrorCode::not_found, "unknown learning point '" + std::string(learning_point_id) + "'");
  }
  if (library.find_device(device_id) == nullptr) {
    throw Error(ErrorCode::not_found, "unknown device '" + std::string(device_id) + "'");
  }
  std::vector<GestureUnit> out;
  for (const auto& g : library.gestures) {
    if (g.context.learning_point_id == learning_point_id && g.context.device_id == device_id) {
      out.push_back(g);
    }
  }
  std::sort(out.begin(), out.end(), [](const GestureUnit& a, const GestureUnit& b) { return a.id < b.id; });
  return out;
}

}  // namespace choreo
