#include "choreo/studio.hpp"

#include "choreo/json_codec.hpp"
#include "choreo/timeline_io.hpp"

namespace choreo {

Studio::Studio(Options options) : options_(std::move(options)) {
  auto loaded = load_library(options_.library_dir);
  if (!loaded.ok()) {
    const auto& first = loaded.issues.front();
    throw Error(ErrorCode::invalid_input, "library has errors: " + first.file + " " + first.key_path + ": " + first.message);
  }
  library_ = std::move(*loaded.library);
  tour_ = load_tour(options_.tour_file);
  if (options_.scene_file) {
    scene_ = codec::scene_from_json(read_json_file(*options_.scene_file));
    validate_scene(*scene_);
  }

  std::optional<std::string> selected;
  const auto overrides = options_.out_dir / kOverridesFile;
  if (std::filesystem::exists(overrides)) {
    const auto doc = read_json_file(overrides);
    if (doc.value("schema_version", "") != kOverridesSchemaVersion) {
      throw Error(ErrorCode::invalid_input, overrides.string() + ": unsupported schema version");
    }
    if (doc.contains("selected_variant") && doc["selected_variant"].is_string()) {
      selected = doc["selected_variant"].get<std::string>();
    }
    if (doc.contains("nudges")) {
      for (const auto& [variant, list] : doc["nudges"].items()) {
        for (const auto& n : list) {
          saved_nudges_[variant].push_back({n.at("event_id").get<std::string>(), n.at("delta_ms").get<std::int64_t>()});
        }
      }
    }
  }
  auto snap = build(selected.value_or(""), {});
  if (auto it = saved_nudges_.find(snap->selected); it != saved_nudges_.end()) {
    snap = build(snap->selected, it->second);
  }
  emit(snap->base, options_.out_dir);
  current_ = std::move(snap);
}

std::shared_ptr<Studio::Snapshot> Studio::build(const std::string& variant, const std::vector<Nudge>& nudges) const {
  auto clients = make_clients(options_.config);
  auto result = compile_tour(library_, tour_, options_.config, clients,
                             variant.empty() ? std::nullopt : std::optional<std::string>(variant));
  auto snap = std::make_shared<Snapshot>();
  snap->base = result.timeline;
  snap->timeline = std::move(result.timeline);
  for (const auto& v : result.variants) snap->variants.push_back(v.variant_label);
  snap->selected = result.selected_variant;
  snap->diagnostics = std::move(result.diagnostics);
  // Replay saved nudges; ones that no longer apply cleanly are dropped.
  for (const auto& n : nudges) {
    try {
      auto next = apply_nudge(snap->timeline, n.event_id, n.delta_ms);
      if (validate_timeline(next).clean()) {
        snap->timeline = std::move(next);
        snap->nudges.push_back(n);
        continue;
      }
    } catch (const Error&) {
    }
    snap->diagnostics.push_back("[overrides] dropped nudge of " + n.event_id + " by " + std::to_string(n.delta_ms) + " ms");
  }
  return snap;
}

std::shared_ptr<const Studio::Snapshot> Studio::snapshot() const {
  std::shared_lock lock(read_mutex_);
  return current_;
}

void Studio::publish(std::shared_ptr<const Snapshot> snap) {
  std::unique_lock lock(read_mutex_);
  current_ = std::move(snap);
}

void Studio::persist(const Snapshot& snap) {
  saved_nudges_[snap.selected] = snap.nudges;
  nlohmann::ordered_json doc;
  doc["schema_version"] = kOverridesSchemaVersion;
  doc["tour_id"] = snap.base.tour_id;
  doc["selected_variant"] = snap.selected;
  nlohmann::ordered_json all = nlohmann::ordered_json::object();
  for (const auto& [variant, list] : saved_nudges_) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& n : list) arr.push_back({{"event_id", n.event_id}, {"delta_ms", n.delta_ms}});
    all[variant] = std::move(arr);
  }
  doc["nudges"] = std::move(all);
  write_json_file(options_.out_dir / kOverridesFile, doc);
}

Timeline Studio::timeline() const { return snapshot()->timeline; }
std::vector<std::string> Studio::variants() const { return snapshot()->variants; }
std::string Studio::selected_variant() const { return snapshot()->selected; }
std::vector<Nudge> Studio::nudges() const { return snapshot()->nudges; }
std::vector<std::string> Studio::diagnostics() const { return snapshot()->diagnostics; }

ExecutionTrace Studio::trace(const SimConfig& sim) const { return simulate(snapshot()->timeline, sim); }

PlacementResult Studio::placement() const {
  if (!scene_) throw Error(ErrorCode::not_found, "no scene loaded");
  return solve_placement(*scene_, options_.config.placement);
}

NudgeOutcome Studio::nudge(const std::string& event_id, std::int64_t delta_ms) {
  std::lock_guard writer(write_mutex_);
  const auto snap = snapshot();
  NudgeOutcome out;
  out.timeline = snap->timeline;
  Timeline next;
  try {
    next = apply_nudge(snap->timeline, event_id, delta_ms);
  } catch (const Error& e) {
    out.status = e.code() == ErrorCode::not_found ? NudgeOutcome::Status::not_found : NudgeOutcome::Status::bad_request;
    out.message = e.what();
    return out;
  }
  auto report = validate_timeline(next);
  if (!report.clean()) {
    out.status = NudgeOutcome::Status::rejected;
    for (auto& f : report.findings) {
      if (f.severity == Finding::Severity::violation) out.violations.push_back(std::move(f));
    }
    out.message = out.violations.front().message;
    return out;
  }
  auto updated = std::make_shared<Snapshot>(*snap);
  updated->timeline = next;
  updated->nudges.push_back({event_id, delta_ms});
  persist(*updated);
  publish(updated);
  out.timeline = std::move(next);
  return out;
}

bool Studio::select_variant(const std::string& label) {
  std::lock_guard writer(write_mutex_);
  const auto snap = snapshot();
  if (std::find(snap->variants.begin(), snap->variants.end(), label) == snap->variants.end()) return false;
  if (label == snap->selected) return true;
  // Keep the outgoing variant's nudges so switching back restores them.
  saved_nudges_[snap->selected] = snap->nudges;
  const auto it = saved_nudges_.find(label);
  auto updated = build(label, it == saved_nudges_.end() ? std::vector<Nudge>{} : it->second);
  emit(updated->base, options_.out_dir);
  persist(*updated);
  publish(updated);
  return true;
}

}  // namespace choreo
