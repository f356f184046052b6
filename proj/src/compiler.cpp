#include "choreo/compiler.hpp"

#include <fstream>

#include "choreo/json_codec.hpp"
#include "choreo/timeline_io.hpp"

namespace choreo {

using nlohmann::json;

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const CompileError&) {
    throw;
  } catch (const Error& e) {
    throw CompileError(name, e.code(), e.what());
  } catch (const std::exception& e) {
    throw CompileError(name, ErrorCode::invalid_input, e.what());
  }
}

geometry::Vec2 point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw Error(ErrorCode::invalid_input, "tour " + path + ": expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

TourSpec tour_from_json(const json& doc) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::invalid_input, "tour: " + what); };
  if (!doc.is_object()) bad("expected an object");
  if (doc.value("schema_version", "") != kTourSchemaVersion) bad("schema_version must be " + std::string(kTourSchemaVersion));
  TourSpec tour;
  try {
    tour.plan.tour_id = doc.at("tour_id").get<std::string>();
    tour.plan.device_ids = doc.at("devices").get<std::vector<std::string>>();
    if (doc.contains("variant") && !doc["variant"].is_null()) tour.plan.variant = doc["variant"].get<std::string>();
    if (doc.contains("staging")) {
      for (const auto& [device, s] : doc["staging"].items()) {
        const std::string path = "/staging/" + device;
        Staging st;
        const auto& r = s.at("robot");
        st.robot = {{r.at("x").get<double>(), r.at("y").get<double>()}, r.at("heading").get<double>()};
        st.projector_height_m = s.value("projector_height_m", st.projector_height_m);
        st.eye_height_m = s.value("eye_height_m", st.eye_height_m);
        st.referent_height_m = s.value("referent_height_m", st.referent_height_m);
        const auto& learners = s.at("learners");
        for (std::size_t i = 0; i < learners.size(); ++i) {
          st.learners.push_back(point(learners[i], path + "/learners/" + std::to_string(i)));
        }
        tour.staging.emplace(device, std::move(st));
      }
    }
  } catch (const json::exception& e) {
    bad(e.what());
  }
  if (tour.plan.tour_id.empty()) bad("tour_id must not be empty");
  return tour;
}

TourSpec load_tour(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::io, "cannot read tour file " + file.string());
  try {
    return tour_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, "tour " + file.string() + ": " + e.what());
  }
}

std::optional<Scene> build_scene(const AssetLibrary& library, const TourSpec& tour, const std::string& device_id,
                                 const PlacementSpec& placement) {
  auto st = tour.staging.find(device_id);
  const auto* device = library.find_device(device_id);
  if (st == tour.staging.end() || device == nullptr) return std::nullopt;
  Scene scene;
  scene.robot = st->second.robot;
  scene.projector_height_m = st->second.projector_height_m;
  scene.learners = st->second.learners;
  scene.eye_height_m = st->second.eye_height_m;
  scene.target_device_id = device_id;
  scene.referent = {device->pose.position.x, device->pose.position.y, st->second.referent_height_m};
  for (const auto& other : library.devices) {
    if (other.id != device_id) scene.obstacles.push_back(other.footprint);
  }
  if (placement.kind == PlacementSpec::Kind::nearby_surface) {
    if (const auto* s = library.find_surface(placement.surface_id)) scene.surfaces.push_back(*s);
  } else {
    for (const auto& s : library.surfaces) {
      if (s.device_id == placement.device_id) scene.surfaces.push_back(s);
    }
  }
  if (scene.surfaces.empty()) return std::nullopt;
  return scene;
}

CompileResult compile_tour(const AssetLibrary& library, const TourSpec& tour, const Config& config,
                           Clients& clients, const std::optional<std::string>& variant) {
  CompileResult result;
  const auto request = stage("generate", [&] {
    return make_generation_request(tour.plan, library, config.techniques);
  });
  auto generated = stage("generate", [&] { return generate_script(request, *clients.text_gen, config.n_variants); });
  result.variants = std::move(generated.scripts);
  for (auto& d : generated.diagnostics) result.diagnostics.push_back("[generate] " + d);

  const auto wanted = variant ? variant : tour.plan.variant;
  const AnnotatedScript* script = &result.variants.front();
  if (wanted) {
    script = nullptr;
    for (const auto& s : result.variants) {
      if (s.variant_label == *wanted) script = &s;
    }
    if (script == nullptr) throw CompileError("select", ErrorCode::not_found, "unknown variant '" + *wanted + "'");
  }
  result.selected_variant = script->variant_label;

  auto segments = stage("segment", [&] { return segment_script(*script, library, config.segmentation); });
  result.segments = stage("synthesize", [&] {
    return synthesize(std::move(segments), *clients.speech, {config.speech_max_concurrency});
  });
  result.selections = stage("compose", [&] {
    std::vector<Selection> out;
    for (const auto& seg : result.segments) {
      out.push_back(compose(seg, library, config.composer_options, clients.composer.get()));
    }
    return out;
  });
  auto aligned = stage("align", [&] { return align(tour.plan.tour_id, result.segments, result.selections, config.alignment); });
  for (auto& w : aligned.warnings) result.diagnostics.push_back("[align] " + w);
  result.timeline = std::move(aligned.timeline);
  result.timeline.variant = result.selected_variant;

  stage("place", [&] {
    std::map<std::string, std::string> device_of;
    for (const auto& seg : result.segments) device_of[seg.id] = seg.device_id;
    for (auto& v : result.timeline.visuals) {
      const auto* asset = library.find_visual(v.ref);
      if (asset == nullptr) continue;
      const auto scene = build_scene(library, tour, device_of[v.segment_id], asset->placement);
      if (!scene) continue;
      try {
        v.placement = solve_placement(*scene, config.placement);
      } catch (const PlacementInfeasible& e) {
        v.placement_error = e.what();
        result.diagnostics.push_back("[place] " + v.id + ": " + e.what());
      }
    }
    return 0;
  });

  result.report = validate_timeline(result.timeline, &library);
  if (!result.report.clean()) {
    throw CompileError("validate", ErrorCode::invalid_input,
                       "compiled timeline violates the alignment contract: " + result.report.findings.front().message);
  }

  for (const auto& ev : result.timeline.narration) {
    if (result.device_durations.empty() || result.device_durations.back().device_id != ev.device_id) {
      result.device_durations.push_back({ev.device_id, 0});
    }
    result.device_durations.back().duration_ms += ev.duration_ms() + ev.pause_after_ms;
  }
  return result;
}

nlohmann::ordered_json compile_summary(const CompileResult& result) {
  nlohmann::ordered_json j;
  j["tour_id"] = result.timeline.tour_id;
  j["variant"] = result.selected_variant;
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (const auto& v : result.variants) labels.push_back(v.variant_label);
  j["variants"] = std::move(labels);
  j["segments"] = result.segments.size();
  j["total_duration_ms"] = result.timeline.end_ms();
  nlohmann::ordered_json per_device = nlohmann::ordered_json::array();
  for (const auto& d : result.device_durations) {
    per_device.push_back({{"device_id", d.device_id}, {"duration_ms", d.duration_ms}});
  }
  j["device_durations"] = std::move(per_device);
  j["coverage"] = codec::to_json(result.report);
  j["diagnostics"] = result.diagnostics;
  return j;
}

}  // namespace choreo
