#include "choreo/json_codec.hpp"

#include <string>

namespace choreo::codec {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::invalid_input, path + ": " + what);
}

const Json& at(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(path + "/" + key, "missing field");
  return *it;
}

std::string str(const Json& obj, const char* key, const std::string& path) {
  const auto& v = at(obj, key, path);
  if (!v.is_string()) bad(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::string str_or(const Json& obj, const char* key, const std::string& path, std::string fallback = {}) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  return str(obj, key, path);
}

std::optional<std::string> opt_str(const Json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  return str(obj, key, path);
}

std::int64_t i64(const Json& obj, const char* key, const std::string& path) {
  const auto& v = at(obj, key, path);
  if (!v.is_number_integer()) bad(path + "/" + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t i64_or(const Json& obj, const char* key, const std::string& path, std::int64_t fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  return i64(obj, key, path);
}

double num(const Json& obj, const char* key, const std::string& path) {
  const auto& v = at(obj, key, path);
  if (!v.is_number()) bad(path + "/" + key, "expected a number");
  return v.get<double>();
}

double num_or(const Json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  return num(obj, key, path);
}

const Json& arr(const Json& obj, const char* key, const std::string& path) {
  const auto& v = at(obj, key, path);
  if (!v.is_array()) bad(path + "/" + key, "expected an array");
  return v;
}

geometry::Vec2 vec2(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) bad(path, "expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

geometry::Vec3 vec3(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
    bad(path, "expected [x, y, z]");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

geometry::Pose2 pose(const Json& v, const std::string& path) {
  return {{num(v, "x", path), num(v, "y", path)}, num(v, "heading", path)};
}

Json opt(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

Channel channel_from(const std::string& s, const std::string& path) {
  if (s == "speech") return Channel::speech;
  if (s == "visual") return Channel::visual;
  if (s == "gesture") return Channel::gesture;
  bad(path, "unknown channel '" + s + "'");
}

void base_fields(Json& j, const ChannelEvent& e) {
  j["id"] = e.id;
  j["ref"] = e.ref;
  j["segment_id"] = e.segment_id;
  j["learning_point_id"] = opt(e.learning_point_id);
  j["start_ms"] = e.start_ms;
  j["end_ms"] = e.end_ms;
  j["nudge_ms"] = e.nudge_ms;
}

void read_base(const Json& j, const std::string& path, Channel channel, ChannelEvent& e) {
  e.id = str(j, "id", path);
  e.channel = channel;
  e.ref = str(j, "ref", path);
  e.segment_id = str(j, "segment_id", path);
  e.learning_point_id = opt_str(j, "learning_point_id", path);
  e.start_ms = i64(j, "start_ms", path);
  e.end_ms = i64(j, "end_ms", path);
  e.nudge_ms = i64_or(j, "nudge_ms", path, 0);
}

Json narration_json(const NarrationEvent& e) {
  Json j;
  base_fields(j, e);
  j["device_id"] = e.device_id;
  j["order_index"] = e.order_index;
  j["text"] = e.text;
  j["audio_ref"] = e.audio_ref;
  j["pause_after_ms"] = e.pause_after_ms;
  j["manual_pause_ms"] = e.manual_pause_ms;
  return j;
}

NarrationEvent narration_from(const Json& j, const std::string& path) {
  NarrationEvent e;
  read_base(j, path, Channel::speech, e);
  e.device_id = str(j, "device_id", path);
  e.order_index = static_cast<int>(i64(j, "order_index", path));
  e.text = str(j, "text", path);
  e.audio_ref = str_or(j, "audio_ref", path);
  e.pause_after_ms = i64(j, "pause_after_ms", path);
  e.manual_pause_ms = i64_or(j, "manual_pause_ms", path, 0);
  return e;
}

Json visual_json(const VisualEvent& e) {
  Json j;
  base_fields(j, e);
  j["image_ref"] = e.image_ref;
  j["placement"] = e.placement ? to_json(*e.placement) : Json(nullptr);
  j["placement_error"] = e.placement_error.empty() ? Json(nullptr) : Json(e.placement_error);
  return j;
}

VisualEvent visual_from(const Json& j, const std::string& path) {
  VisualEvent e;
  read_base(j, path, Channel::visual, e);
  e.image_ref = str(j, "image_ref", path);
  if (j.contains("placement") && !j["placement"].is_null()) e.placement = placement_from_json(j["placement"]);
  e.placement_error = str_or(j, "placement_error", path);
  return e;
}

Json gesture_json(const GestureEvent& e) {
  Json j;
  base_fields(j, e);
  j["kind"] = std::string(to_string(e.kind));
  j["motion_ref"] = e.motion_ref;
  j["robot_pose"] = to_json(e.robot_pose);
  return j;
}

GestureEvent gesture_from(const Json& j, const std::string& path) {
  GestureEvent e;
  read_base(j, path, Channel::gesture, e);
  auto kind = parse_gesture_kind(str(j, "kind", path));
  if (!kind) bad(path + "/kind", "unknown gesture kind");
  e.kind = *kind;
  e.motion_ref = str(j, "motion_ref", path);
  e.robot_pose = pose(at(j, "robot_pose", path), path + "/robot_pose");
  return e;
}

Json header(const Timeline& t, const char* channel) {
  Json j;
  j["schema_version"] = kTimelineSchemaVersion;
  j["channel"] = channel;
  j["tour_id"] = t.tour_id;
  j["variant"] = t.variant;
  j["clock_origin_ms"] = 0;
  j["base_pause_ms"] = t.base_pause_ms;
  j["tour_end_ms"] = t.end_ms();
  return j;
}

void check_version(const Json& doc, const char* expected, const std::string& path) {
  const auto v = str(doc, "schema_version", path);
  if (v != expected) bad(path + "/schema_version", "unsupported schema version '" + v + "'");
}

}  // namespace

Json to_json(geometry::Vec2 v) { return Json::array({v.x, v.y}); }
Json to_json(geometry::Vec3 v) { return Json::array({v.x, v.y, v.z}); }

Json to_json(const geometry::Pose2& p) {
  Json j;
  j["x"] = p.position.x;
  j["y"] = p.position.y;
  j["heading"] = p.heading;
  return j;
}

Json to_json(const AnnotatedScript& script) {
  Json j;
  j["variant_label"] = script.variant_label;
  Json devices = Json::array();
  for (const auto& d : script.devices) {
    Json dj;
    dj["device_id"] = d.device_id;
    Json blocks = Json::array();
    for (const auto& b : d.blocks) {
      Json bj;
      bj["text"] = b.text;
      bj["learning_point_id"] = opt(b.learning_point_id);
      if (!b.marked_text.empty()) bj["marked_text"] = b.marked_text;
      blocks.push_back(std::move(bj));
    }
    dj["blocks"] = std::move(blocks);
    devices.push_back(std::move(dj));
  }
  j["devices"] = std::move(devices);
  return j;
}

AnnotatedScript script_from_json(const Json& doc) {
  AnnotatedScript s;
  s.variant_label = str_or(doc, "variant_label", "");
  const auto& devices = arr(doc, "devices", "");
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const auto path = "/devices/" + std::to_string(i);
    DeviceNarration d;
    d.device_id = str(devices[i], "device_id", path);
    const auto& blocks = arr(devices[i], "blocks", path);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto bp = path + "/blocks/" + std::to_string(b);
      d.blocks.push_back({str(blocks[b], "text", bp), opt_str(blocks[b], "learning_point_id", bp),
                          str_or(blocks[b], "marked_text", bp)});
    }
    s.devices.push_back(std::move(d));
  }
  return s;
}

Json to_json(const GenerationRequest& r) {
  Json j;
  j["tour_id"] = r.tour.tour_id;
  j["device_order"] = r.tour.device_ids;
  Json devices = Json::array();
  for (const auto& d : r.devices) {
    Json dj;
    dj["id"] = d.id;
    dj["name"] = d.name;
    dj["description"] = d.description;
    devices.push_back(std::move(dj));
  }
  j["devices"] = std::move(devices);
  Json lps = Json::array();
  for (const auto& lp : r.learning_points) {
    Json lj;
    lj["id"] = lp.id;
    lj["device_id"] = lp.device_id;
    lj["category"] = std::string(to_string(lp.category));
    lj["text"] = lp.text;
    lps.push_back(std::move(lj));
  }
  j["learning_points"] = std::move(lps);
  Json t;
  t["transition_phrases"] = r.techniques.transition_phrases;
  t["analogy_hints"] = r.techniques.analogy_hints;
  t["target_minutes_per_device"] = Json::array({r.techniques.target_minutes_min, r.techniques.target_minutes_max});
  j["narration_techniques"] = std::move(t);
  return j;
}

Json to_json(const Surface& s) {
  Json j;
  j["id"] = s.id;
  if (!s.device_id.empty()) j["device_id"] = s.device_id;
  j["start"] = to_json(s.start);
  j["end"] = to_json(s.end);
  j["z_min"] = s.z_min;
  j["z_max"] = s.z_max;
  j["normal"] = to_json(s.normal);
  return j;
}

Surface surface_from_json(const Json& doc) {
  Surface s;
  s.id = str(doc, "id", "");
  s.device_id = str_or(doc, "device_id", "");
  s.start = vec2(at(doc, "start", ""), "/start");
  s.end = vec2(at(doc, "end", ""), "/end");
  s.z_min = num(doc, "z_min", "");
  s.z_max = num(doc, "z_max", "");
  s.normal = vec2(at(doc, "normal", ""), "/normal");
  const double n = geometry::norm(s.normal);
  if (n > 0.0) s.normal = s.normal * (1.0 / n);
  return s;
}

Json to_json(const Scene& scene) {
  Json j;
  j["schema_version"] = kSceneSchemaVersion;
  j["robot"] = to_json(scene.robot);
  j["projector_height_m"] = scene.projector_height_m;
  Json learners = Json::array();
  for (const auto& l : scene.learners) learners.push_back(to_json(l));
  j["learners"] = std::move(learners);
  j["eye_height_m"] = scene.eye_height_m;
  j["target_device_id"] = scene.target_device_id;
  j["referent"] = to_json(scene.referent);
  Json obstacles = Json::array();
  for (const auto& poly : scene.obstacles) {
    Json pj = Json::array();
    for (const auto& v : poly) pj.push_back(to_json(v));
    obstacles.push_back(std::move(pj));
  }
  j["obstacles"] = std::move(obstacles);
  Json surfaces = Json::array();
  for (const auto& s : scene.surfaces) surfaces.push_back(to_json(s));
  j["surfaces"] = std::move(surfaces);
  return j;
}

Scene scene_from_json(const Json& doc) {
  check_version(doc, kSceneSchemaVersion, "");
  Scene s;
  s.robot = pose(at(doc, "robot", ""), "/robot");
  s.projector_height_m = num(doc, "projector_height_m", "");
  const auto& learners = arr(doc, "learners", "");
  for (std::size_t i = 0; i < learners.size(); ++i) {
    s.learners.push_back(vec2(learners[i], "/learners/" + std::to_string(i)));
  }
  s.eye_height_m = num(doc, "eye_height_m", "");
  s.target_device_id = str_or(doc, "target_device_id", "");
  s.referent = vec3(at(doc, "referent", ""), "/referent");
  if (doc.contains("obstacles")) {
    const auto& obstacles = arr(doc, "obstacles", "");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const auto path = "/obstacles/" + std::to_string(i);
      if (!obstacles[i].is_array()) bad(path, "expected a polygon");
      geometry::Polygon poly;
      for (std::size_t k = 0; k < obstacles[i].size(); ++k) {
        poly.push_back(vec2(obstacles[i][k], path + "/" + std::to_string(k)));
      }
      s.obstacles.push_back(std::move(poly));
    }
  }
  const auto& surfaces = arr(doc, "surfaces", "");
  for (const auto& sj : surfaces) s.surfaces.push_back(surface_from_json(sj));
  return s;
}

Json to_json(const PlacementResult& r) {
  Json j;
  j["surface_id"] = r.surface_id;
  j["along_m"] = r.along_m;
  j["height_m"] = r.height_m;
  j["point"] = to_json(r.point);
  j["pan_rad"] = r.pan_rad;
  j["tilt_rad"] = r.tilt_rad;
  j["incidence_rad"] = r.incidence_rad;
  Json score;
  score["referent_proximity"] = r.score.referent_proximity;
  score["incidence"] = r.score.incidence;
  score["learner_visibility"] = r.score.learner_visibility;
  score["total"] = r.score.total;
  j["score"] = std::move(score);
  return j;
}

PlacementResult placement_from_json(const Json& doc) {
  PlacementResult r;
  r.surface_id = str(doc, "surface_id", "");
  r.along_m = num(doc, "along_m", "");
  r.height_m = num(doc, "height_m", "");
  r.point = vec3(at(doc, "point", ""), "/point");
  r.pan_rad = num(doc, "pan_rad", "");
  r.tilt_rad = num(doc, "tilt_rad", "");
  r.incidence_rad = num(doc, "incidence_rad", "");
  const auto& score = at(doc, "score", "");
  r.score.referent_proximity = num(score, "referent_proximity", "/score");
  r.score.incidence = num(score, "incidence", "/score");
  r.score.learner_visibility = num(score, "learner_visibility", "/score");
  r.score.total = num(score, "total", "/score");
  return r;
}

TimelineDocuments to_documents(const Timeline& t) {
  TimelineDocuments docs{header(t, "narration"), header(t, "visuals"), header(t, "gestures")};
  Json n = Json::array();
  for (const auto& e : t.narration) n.push_back(narration_json(e));
  docs.narration["events"] = std::move(n);
  Json v = Json::array();
  for (const auto& e : t.visuals) v.push_back(visual_json(e));
  docs.visuals["events"] = std::move(v);
  Json g = Json::array();
  for (const auto& e : t.gestures) g.push_back(gesture_json(e));
  docs.gestures["events"] = std::move(g);
  return docs;
}

Timeline timeline_from_documents(const TimelineDocuments& docs) {
  Timeline t;
  const std::pair<const Json*, const char*> files[] = {
      {&docs.narration, "narration"}, {&docs.visuals, "visuals"}, {&docs.gestures, "gestures"}};
  for (const auto& [doc, channel] : files) {
    const std::string path = std::string(channel) + ".json";
    check_version(*doc, kTimelineSchemaVersion, path);
    if (str(*doc, "channel", path) != channel) bad(path + "/channel", "expected '" + std::string(channel) + "'");
    if (i64(*doc, "clock_origin_ms", path) != 0) bad(path + "/clock_origin_ms", "clock origin must be 0");
  }
  t.tour_id = str(docs.narration, "tour_id", "narration.json");
  t.variant = str_or(docs.narration, "variant", "narration.json");
  t.base_pause_ms = i64(docs.narration, "base_pause_ms", "narration.json");
  for (const auto* doc : {&docs.visuals, &docs.gestures}) {
    if (str(*doc, "tour_id", "") != t.tour_id) bad("/tour_id", "timeline files belong to different tours");
  }
  const auto& n = arr(docs.narration, "events", "narration.json");
  for (std::size_t i = 0; i < n.size(); ++i) {
    t.narration.push_back(narration_from(n[i], "narration.json/events/" + std::to_string(i)));
  }
  const auto& v = arr(docs.visuals, "events", "visuals.json");
  for (std::size_t i = 0; i < v.size(); ++i) {
    t.visuals.push_back(visual_from(v[i], "visuals.json/events/" + std::to_string(i)));
  }
  const auto& g = arr(docs.gestures, "events", "gestures.json");
  for (std::size_t i = 0; i < g.size(); ++i) {
    t.gestures.push_back(gesture_from(g[i], "gestures.json/events/" + std::to_string(i)));
  }
  return t;
}

Json to_json(const Timeline& t) {
  Json j;
  j["schema_version"] = kTimelineSchemaVersion;
  j["tour_id"] = t.tour_id;
  j["variant"] = t.variant;
  j["clock_origin_ms"] = 0;
  j["base_pause_ms"] = t.base_pause_ms;
  j["tour_end_ms"] = t.end_ms();
  auto docs = to_documents(t);
  j["narration"] = std::move(docs.narration["events"]);
  j["visuals"] = std::move(docs.visuals["events"]);
  j["gestures"] = std::move(docs.gestures["events"]);
  return j;
}

Timeline timeline_from_json(const Json& doc) {
  check_version(doc, kTimelineSchemaVersion, "");
  TimelineDocuments docs;
  const char* channels[] = {"narration", "visuals", "gestures"};
  Json* targets[] = {&docs.narration, &docs.visuals, &docs.gestures};
  for (int i = 0; i < 3; ++i) {
    Json& d = *targets[i];
    d["schema_version"] = kTimelineSchemaVersion;
    d["channel"] = channels[i];
    d["tour_id"] = str(doc, "tour_id", "");
    d["variant"] = str_or(doc, "variant", "");
    d["clock_origin_ms"] = i64_or(doc, "clock_origin_ms", "", 0);
    d["base_pause_ms"] = i64(doc, "base_pause_ms", "");
    d["events"] = arr(doc, channels[i], "");
  }
  return timeline_from_documents(docs);
}

Json to_json(const ExecutionTrace& trace) {
  Json j;
  j["schema_version"] = kTraceSchemaVersion;
  j["tour_id"] = trace.tour_id;
  j["seed"] = trace.config.seed;
  Json jitter;
  jitter["speech"] = trace.config.jitter.speech_ms;
  jitter["visual"] = trace.config.jitter.visual_ms;
  jitter["gesture"] = trace.config.jitter.gesture_ms;
  j["jitter_ms"] = std::move(jitter);
  j["epsilon_ms"] = trace.config.epsilon_ms;
  Json records = Json::array();
  for (const auto& r : trace.records) {
    Json rj;
    rj["event_id"] = r.event_id;
    rj["channel"] = std::string(to_string(r.channel));
    rj["scheduled_start"] = r.scheduled_start;
    rj["actual_start"] = r.actual_start;
    rj["scheduled_end"] = r.scheduled_end;
    rj["actual_end"] = r.actual_end;
    records.push_back(std::move(rj));
  }
  j["records"] = std::move(records);
  return j;
}

ExecutionTrace trace_from_json(const Json& doc) {
  check_version(doc, kTraceSchemaVersion, "");
  ExecutionTrace t;
  t.tour_id = str(doc, "tour_id", "");
  const auto& seed = at(doc, "seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) bad("/seed", "expected an integer");
  t.config.seed = seed.get<std::uint64_t>();
  const auto& jitter = at(doc, "jitter_ms", "");
  t.config.jitter = {i64(jitter, "speech", "/jitter_ms"), i64(jitter, "visual", "/jitter_ms"),
                     i64(jitter, "gesture", "/jitter_ms")};
  t.config.epsilon_ms = num_or(doc, "epsilon_ms", "", 1.0);
  const auto& records = arr(doc, "records", "");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto path = "/records/" + std::to_string(i);
    TraceRecord r;
    r.event_id = str(records[i], "event_id", path);
    r.channel = channel_from(str(records[i], "channel", path), path + "/channel");
    r.scheduled_start = i64(records[i], "scheduled_start", path);
    r.actual_start = i64(records[i], "actual_start", path);
    r.scheduled_end = i64(records[i], "scheduled_end", path);
    r.actual_end = i64(records[i], "actual_end", path);
    t.records.push_back(std::move(r));
  }
  return t;
}

Json to_json(const ValidationReport& report) {
  Json j;
  j["violations"] = report.violation_count();
  j["warnings"] = report.warning_count();
  Json findings = Json::array();
  for (const auto& f : report.findings) {
    Json fj;
    fj["severity"] = f.severity == Finding::Severity::violation ? "violation" : "warning";
    fj["code"] = f.code;
    fj["event_ids"] = f.event_ids;
    if (!f.learning_point_id.empty()) fj["learning_point_id"] = f.learning_point_id;
    fj["message"] = f.message;
    findings.push_back(std::move(fj));
  }
  j["findings"] = std::move(findings);
  return j;
}

Json to_json(const TraceReport& report) {
  Json j;
  j["clean"] = report.clean();
  Json findings = Json::array();
  for (const auto& f : report.findings) {
    Json fj;
    fj["kind"] = f.kind == TraceFinding::Kind::deviation ? "deviation" : "overlap";
    fj["event_ids"] = f.event_ids;
    if (f.kind == TraceFinding::Kind::deviation) {
      fj["start_deviation_ms"] = f.start_deviation_ms;
      fj["end_deviation_ms"] = f.end_deviation_ms;
    }
    fj["message"] = f.message;
    findings.push_back(std::move(fj));
  }
  j["findings"] = std::move(findings);
  return j;
}

Json to_json(const std::vector<LoadIssue>& issues) {
  Json out = Json::array();
  for (const auto& i : issues) {
    Json j;
    j["severity"] = i.severity == LoadIssue::Severity::error ? "error" : "warning";
    j["code"] = i.code;
    j["file"] = i.file;
    j["key_path"] = i.key_path;
    j["message"] = i.message;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace choreo::codec
