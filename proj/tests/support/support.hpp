#pragma once

// Test helpers: temp directories, a manifest writer, random generators for
// libraries/tours/scenes, and oracles that recompute expected results
// straight from the documented rules without calling the code under test.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "choreo/asset_model.hpp"
#include "choreo/compiler.hpp"
#include "choreo/placement.hpp"
#include "choreo/simulator.hpp"
#include "choreo/timeline.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using choreo::geometry::Polygon;
using choreo::geometry::Vec2;
using choreo::geometry::Vec3;

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("choreo-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// --- manifests -------------------------------------------------------------

inline nlohmann::json pose_json(const choreo::geometry::Pose2& p) {
  return {{"x", p.position.x}, {"y", p.position.y}, {"heading", p.heading}};
}

inline void write_manifest(const fs::path& dir, const std::string& name, const std::string& key,
                           const nlohmann::json& items) {
  nlohmann::json doc;
  doc["schema_version"] = "choreo.library/1";
  doc[key] = items;
  write_file(dir / name, doc.dump(2) + "\n");
}

inline void write_library(const fs::path& dir, const choreo::AssetLibrary& lib) {
  nlohmann::json lps = nlohmann::json::array();
  for (const auto& lp : lib.learning_points) {
    lps.push_back({{"id", lp.id},
                   {"device_id", lp.device_id},
                   {"category", std::string(choreo::to_string(lp.category))},
                   {"text", lp.text}});
  }
  nlohmann::json devs = nlohmann::json::array();
  for (const auto& d : lib.devices) {
    nlohmann::json fp = nlohmann::json::array();
    for (const auto& v : d.footprint) fp.push_back({v.x, v.y});
    devs.push_back({{"id", d.id}, {"name", d.name}, {"description", d.description}, {"pose", pose_json(d.pose)},
                    {"footprint", fp}});
  }
  nlohmann::json vis = nlohmann::json::array();
  for (const auto& v : lib.visuals) {
    nlohmann::json j = {{"id", v.id},
                        {"image_ref", v.image_ref},
                        {"description", v.description},
                        {"learning_point_id", v.learning_point_id},
                        {"sequence_rank", v.sequence_rank}};
    if (!v.cue.empty()) j["cue"] = v.cue;
    if (v.placement.kind == choreo::PlacementSpec::Kind::on_equipment) {
      j["placement"] = {{"kind", "on_equipment"}, {"device_id", v.placement.device_id}, {"region", v.placement.region}};
    } else {
      j["placement"] = {{"kind", "nearby_surface"}, {"surface_id", v.placement.surface_id}};
    }
    vis.push_back(j);
  }
  nlohmann::json ges = nlohmann::json::array();
  for (const auto& g : lib.gestures) {
    ges.push_back({{"id", g.id},
                   {"kind", std::string(choreo::to_string(g.kind))},
                   {"motion_ref", g.motion_ref},
                   {"duration_ms", g.duration_ms},
                   {"robot_pose", pose_json(g.robot_pose)},
                   {"description", g.description},
                   {"context",
                    {{"device_id", g.context.device_id},
                     {"learning_point_id", g.context.learning_point_id},
                     {"narration", g.context.narration}}}});
  }
  nlohmann::json surf = nlohmann::json::array();
  for (const auto& s : lib.surfaces) {
    nlohmann::json j = {{"id", s.id},
                        {"start", {s.start.x, s.start.y}},
                        {"end", {s.end.x, s.end.y}},
                        {"z_min", s.z_min},
                        {"z_max", s.z_max},
                        {"normal", {s.normal.x, s.normal.y}}};
    if (!s.device_id.empty()) j["device_id"] = s.device_id;
    surf.push_back(j);
  }
  fs::create_directories(dir);
  write_manifest(dir, "learning_points.json", "learning_points", lps);
  write_manifest(dir, "devices.json", "devices", devs);
  write_manifest(dir, "visuals.json", "visuals", vis);
  write_manifest(dir, "gestures.json", "gestures", ges);
  write_manifest(dir, "surfaces.json", "surfaces", surf);
}

// --- small builders ---------------------------------------------------------

inline Polygon square(Vec2 c, double half) {
  return {{c.x - half, c.y - half}, {c.x + half, c.y - half}, {c.x + half, c.y + half}, {c.x - half, c.y + half}};
}

inline choreo::DeviceInfo device(const std::string& id, Vec2 at = {0, 0}) {
  choreo::DeviceInfo d;
  d.id = id;
  d.name = id + " machine";
  d.pose = {at, 0.0};
  d.footprint = square(at, 0.3);
  return d;
}

inline choreo::LearningPoint learning_point(const std::string& id, const std::string& device_id,
                                            const std::string& text,
                                            choreo::LearningCategory cat = choreo::LearningCategory::operation) {
  return {id, device_id, cat, text};
}

inline choreo::VisualAsset visual(const std::string& id, const std::string& lp, const std::string& device_id,
                                  int rank = 1, const std::string& cue = "") {
  choreo::VisualAsset v;
  v.id = id;
  v.image_ref = "images/" + id + ".png";
  v.description = "picture " + id;
  v.learning_point_id = lp;
  v.sequence_rank = rank;
  v.cue = cue;
  v.placement.kind = choreo::PlacementSpec::Kind::on_equipment;
  v.placement.device_id = device_id;
  v.placement.region = "front";
  return v;
}

inline choreo::GestureUnit gesture(const std::string& id, choreo::GestureKind kind, const std::string& lp,
                                   const std::string& device_id, std::int64_t duration_ms) {
  choreo::GestureUnit g;
  g.id = id;
  g.kind = kind;
  g.motion_ref = "motions/" + id + ".json";
  g.duration_ms = duration_ms;
  g.description = "gesture " + id;
  g.context = {device_id, lp, ""};
  return g;
}

inline choreo::SpeechSegment segment(const std::string& id, int order_index, std::int64_t duration_ms,
                                     std::optional<std::string> lp = std::nullopt, const std::string& text = "Hello.",
                                     const std::string& device_id = "dev") {
  choreo::SpeechSegment s;
  s.id = id;
  s.device_id = device_id;
  s.order_index = order_index;
  s.text = text;
  s.audio_ref = "stub://audio/" + id + ".wav";
  s.duration_ms = duration_ms;
  s.learning_point_id = std::move(lp);
  return s;
}

inline void sort_library(choreo::AssetLibrary& lib) {
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(lib.learning_points.begin(), lib.learning_points.end(), by_id);
  std::sort(lib.devices.begin(), lib.devices.end(), by_id);
  std::sort(lib.visuals.begin(), lib.visuals.end(), by_id);
  std::sort(lib.gestures.begin(), lib.gestures.end(), by_id);
  std::sort(lib.surfaces.begin(), lib.surfaces.end(), by_id);
}

// --- random generation --------------------------------------------------------

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> words = {
      "laser", "beam", "lens", "bed",   "motor", "spindle", "filament", "nozzle", "blade", "clamp",
      "press", "heat", "cool", "guard", "switch", "fence",  "chuck",    "tool",   "sheet", "panel",
      "plastic", "wood", "metal", "cut",  "drill", "slowly", "firmly", "always", "never", "check"};
  return words;
}

inline std::string random_sentence(Rng& rng) {
  const auto& words = word_pool();
  std::string s;
  const int n = uniform_int(rng, 2, 9);
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += words[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(words.size()) - 1))];
  }
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  static const char* ends[] = {".", "!", "?", "."};
  return s + ends[uniform_int(rng, 0, 3)];
}

inline std::vector<std::string> random_sentences(Rng& rng, int lo, int hi) {
  std::vector<std::string> out;
  const int n = uniform_int(rng, lo, hi);
  for (int i = 0; i < n; ++i) out.push_back(random_sentence(rng));
  return out;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

struct FuzzCase {
  choreo::AssetLibrary library;
  choreo::TourSpec tour;
  choreo::Config config;
};

// Random library of 1-6 devices with multi-sentence learning points, 0-3
// ranked visuals (some with cues) and 0-4 gestures of random kind and
// duration per learning point, plus a random tour and alignment config.
inline FuzzCase random_case(Rng& rng) {
  FuzzCase fc;
  auto& lib = fc.library;
  const int n_devices = uniform_int(rng, 1, 6);
  int gesture_counter = 0;
  for (int d = 0; d < n_devices; ++d) {
    const std::string dev_id = "dev" + std::to_string(d);
    lib.devices.push_back(device(dev_id, {2.0 * d, 0.0}));
    const int n_lp = uniform_int(rng, 1, 5);
    for (int l = 0; l < n_lp; ++l) {
      const std::string lp_id = dev_id + "/lp" + std::to_string(l);
      const auto sentences = random_sentences(rng, 1, 5);
      lib.learning_points.push_back(learning_point(
          lp_id, dev_id, join(sentences), static_cast<choreo::LearningCategory>(uniform_int(rng, 0, 2))));
      const int n_vis = uniform_int(rng, 0, 3);
      std::vector<int> ranks(static_cast<std::size_t>(n_vis));
      for (int k = 0; k < n_vis; ++k) ranks[static_cast<std::size_t>(k)] = k + 1;
      std::shuffle(ranks.begin(), ranks.end(), rng);
      for (int k = 0; k < n_vis; ++k) {
        std::string cue;
        if (coin(rng, 0.6)) {
          const auto& sentence = sentences[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(sentences.size()) - 1))];
          const auto space = sentence.find(' ');
          cue = sentence.substr(0, space);
        }
        lib.visuals.push_back(visual(lp_id + "/v" + std::to_string(k), lp_id, dev_id, ranks[static_cast<std::size_t>(k)], cue));
      }
      const int n_g = uniform_int(rng, 0, 4);
      for (int k = 0; k < n_g; ++k) {
        lib.gestures.push_back(gesture("g" + std::to_string(gesture_counter++),
                                       static_cast<choreo::GestureKind>(uniform_int(rng, 0, 3)), lp_id, dev_id,
                                       uniform_int(rng, 200, 30000)));
      }
    }
  }
  sort_library(lib);

  std::vector<std::string> ids;
  for (const auto& d : lib.devices) ids.push_back(d.id);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(ids.size()))));
  fc.tour.plan.tour_id = "fuzz";
  fc.tour.plan.device_ids = ids;

  fc.config.n_variants = uniform_int(rng, 1, 3);
  fc.config.speech_rate_chars_per_sec = uniform(rng, 3.0, 20.0);
  fc.config.alignment.base_pause_ms = uniform_int(rng, 0, 2000);
  fc.config.composer_options.max_gestures_per_segment = uniform_int(rng, 0, 3);
  return fc;
}

// Text generator that exercises every segmentation path: unmarked prose
// blocks, marked blocks with extra sentences around the learning point and
// narrowed markers. Deterministic for a given seed.
class FuzzTextGen final : public choreo::TextGenClient {
 public:
  explicit FuzzTextGen(std::uint64_t seed) : seed_(seed) {}
  std::vector<choreo::AnnotatedScript> generate(const choreo::GenerationRequest& request, int n_variants) override {
    Rng rng(seed_);
    std::vector<choreo::AnnotatedScript> out;
    for (int v = 0; v < n_variants; ++v) {
      choreo::AnnotatedScript script;
      script.variant_label = "f" + std::to_string(v + 1);
      for (const auto& dev : request.devices) {
        choreo::DeviceNarration dn;
        dn.device_id = dev.id;
        if (coin(rng, 0.3)) dn.blocks.push_back({join(random_sentences(rng, 1, 3)), std::nullopt, {}});
        for (const auto& lp : request.learning_points) {
          if (lp.device_id != dev.id) continue;
          choreo::NarrationBlock block{lp.text, lp.id, {}};
          if (coin(rng, 0.4)) {
            auto before = random_sentences(rng, 0, 2);
            auto after = random_sentences(rng, 0, 2);
            block.text = join(before) + (before.empty() ? "" : " ") + lp.text + (after.empty() ? "" : " ") + join(after);
            block.marked_text = lp.text;
          }
          dn.blocks.push_back(std::move(block));
          if (coin(rng, 0.2)) dn.blocks.push_back({random_sentence(rng), std::nullopt, {}});
        }
        dn.blocks.push_back({"Please follow me.", std::nullopt, {}});
        script.devices.push_back(std::move(dn));
      }
      out.push_back(std::move(script));
    }
    return out;
  }

 private:
  std::uint64_t seed_;
};

// --- alignment oracle -------------------------------------------------------

// Recomputes the alignment laws from the timeline's own segments and the
// library, independent of align() and validate_timeline(). Returns one
// message per broken law.
inline std::vector<std::string> alignment_law_breaks(const choreo::Timeline& t, std::int64_t base_pause) {
  std::vector<std::string> out;
  auto nominal = [](const choreo::ChannelEvent& e) { return std::pair{e.start_ms - e.nudge_ms, e.end_ms - e.nudge_ms}; };

  // Channel exclusivity: sort each channel and compare neighbours.
  auto exclusive = [&](std::vector<std::pair<std::int64_t, std::int64_t>> spans, const char* name) {
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first < spans[i - 1].second) out.push_back(std::string("overlap on ") + name);
    }
  };
  std::vector<std::pair<std::int64_t, std::int64_t>> sp, vi, ge;
  for (const auto& e : t.narration) sp.emplace_back(e.start_ms, e.end_ms);
  for (const auto& e : t.visuals) vi.emplace_back(e.start_ms, e.end_ms);
  for (const auto& e : t.gestures) ge.emplace_back(e.start_ms, e.end_ms);
  exclusive(sp, "speech");
  exclusive(vi, "visual");
  exclusive(ge, "gesture");

  std::int64_t clock = 0;
  for (std::size_t k = 0; k < t.narration.size(); ++k) {
    const auto& seg = t.narration[k];
    const auto [s0, s1] = nominal(seg);
    if (s0 != clock) out.push_back(seg.id + " does not start where the previous pause ends");

    std::int64_t gesture_total = 0;
    for (const auto& g : t.gestures) {
      if (g.segment_id == seg.ref) gesture_total += g.end_ms - g.start_ms;
    }
    const std::int64_t expected_pause = base_pause + std::max<std::int64_t>(0, gesture_total - (s1 - s0));
    if (seg.pause_after_ms - seg.manual_pause_ms != expected_pause) {
      out.push_back(seg.id + " pause " + std::to_string(seg.pause_after_ms - seg.manual_pause_ms) + " != " +
                    std::to_string(expected_pause));
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> imgs;
    for (const auto& v : t.visuals) {
      if (v.segment_id == seg.ref) imgs.push_back(nominal(v));
    }
    std::sort(imgs.begin(), imgs.end());
    if (imgs.size() == 1 && imgs[0] != std::pair{s0, s1}) out.push_back(seg.id + " single visual span != segment span");
    if (imgs.size() > 1) {
      std::int64_t cursor = s0;
      for (const auto& [a, b] : imgs) {
        if (a != cursor || b <= a) out.push_back(seg.id + " images do not partition the segment");
        cursor = b;
      }
      if (cursor != s1) out.push_back(seg.id + " last image does not end at segment end");
    }
    clock = s1 + seg.pause_after_ms;
  }
  if (t.end_ms() != clock) out.push_back("tour end != sum of segments and pauses");
  return out;
}

// --- simulation oracle ---------------------------------------------------------

// Same documented dispatch rule, written as a plain per-channel walk:
// offsets drawn channel by channel in schedule order as
// rng() % (2J+1) - J, start = max(scheduled + offset, 0, previous end).
inline std::map<std::string, std::pair<std::int64_t, std::int64_t>> expected_actuals(const choreo::Timeline& t,
                                                                                     const choreo::SimConfig& cfg) {
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> out;
  Rng rng(cfg.seed);
  auto walk = [&](std::vector<const choreo::ChannelEvent*> evs, std::int64_t bound) {
    std::sort(evs.begin(), evs.end(), [](auto* a, auto* b) {
      return a->start_ms != b->start_ms ? a->start_ms < b->start_ms : a->id < b->id;
    });
    std::vector<std::int64_t> offsets;
    for (std::size_t i = 0; i < evs.size(); ++i) {
      offsets.push_back(bound > 0 ? static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * bound + 1)) - bound : 0);
    }
    std::int64_t free_at = 0;
    for (std::size_t i = 0; i < evs.size(); ++i) {
      const auto start = std::max({evs[i]->start_ms + offsets[i], std::int64_t{0}, free_at});
      const auto end = start + (evs[i]->end_ms - evs[i]->start_ms);
      out[evs[i]->id] = {start, end};
      free_at = end;
    }
  };
  std::vector<const choreo::ChannelEvent*> sp, vi, ge;
  for (const auto& e : t.narration) sp.push_back(&e);
  for (const auto& e : t.visuals) vi.push_back(&e);
  for (const auto& e : t.gestures) ge.push_back(&e);
  walk(sp, cfg.jitter.speech_ms);
  walk(vi, cfg.jitter.visual_ms);
  walk(ge, cfg.jitter.gesture_ms);
  return out;
}

// --- geometry oracles -----------------------------------------------------------

// Point-in-polygon by ray casting, boundary counted as inside (within tol).
inline bool inside_or_on(Vec2 p, const Polygon& poly, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    const Vec2 ab = b - a;
    const double len2 = choreo::geometry::dot(ab, ab);
    double t = len2 > 0 ? choreo::geometry::dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (choreo::geometry::norm(p - (a + ab * t)) <= tol) return true;
  }
  bool in = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y) &&
        p.x < (poly[j].x - poly[i].x) * (p.y - poly[i].y) / (poly[j].y - poly[i].y) + poly[i].x) {
      in = !in;
    }
  }
  return in;
}

// Samples the open segment pq every `step` meters.
inline bool sampled_occluded(Vec2 p, Vec2 q, const std::vector<Polygon>& obstacles, double step = 0.001,
                             double tol = 1e-9) {
  const double len = choreo::geometry::norm(q - p);
  const auto n = static_cast<std::size_t>(std::ceil(len / step));
  for (std::size_t i = 1; i < n; ++i) {
    const Vec2 s = p + (q - p) * (static_cast<double>(i) / static_cast<double>(n));
    for (const auto& poly : obstacles) {
      if (inside_or_on(s, poly, tol)) return true;
    }
  }
  return false;
}

struct GimbalOracle {
  double pan;
  double tilt;
};

// Pan from the heading vector via atan2 of cross and dot; tilt via asin.
inline GimbalOracle gimbal_oracle(Vec2 projector, double height, double heading, Vec3 target) {
  const Vec2 h{std::cos(heading), std::sin(heading)};
  const Vec2 d{target.x - projector.x, target.y - projector.y};
  const double dz = target.z - height;
  const double dist = std::sqrt(d.x * d.x + d.y * d.y + dz * dz);
  const double pan = (d.x == 0 && d.y == 0) ? 0.0 : std::atan2(h.x * d.y - h.y * d.x, h.x * d.x + h.y * d.y);
  return {pan, std::asin(dz / dist)};
}

struct OracleCandidate {
  std::string surface_id;
  double along = 0;
  double height = 0;
  double score = 0;
};

// Dense brute force over every surface at `step`, with the filters and
// score written out from their definitions. Occlusion uses the exact
// segment test from geometry (verified separately against sampling).
inline std::optional<OracleCandidate> brute_force_placement(const choreo::Scene& scene,
                                                            const choreo::PlacementConfig& cfg, double step) {
  using namespace choreo::geometry;
  std::optional<OracleCandidate> best;
  const Vec3 proj{scene.robot.position.x, scene.robot.position.y, scene.projector_height_m};
  for (const auto& s : scene.surfaces) {
    const Vec2 dir = (s.end - s.start) * (1.0 / norm(s.end - s.start));
    const double len = norm(s.end - s.start);
    const Vec3 n{s.normal.x, s.normal.y, 0};
    for (double a = 0; a <= len + 1e-9; a += step) {
      for (double z = s.z_min; z <= s.z_max + 1e-9; z += step) {
        const Vec2 p2 = s.start + dir * a;
        const Vec3 p{p2.x, p2.y, z};
        if (occluded(scene.robot.position, p2, std::span<const Polygon>(scene.obstacles))) continue;
        bool learners_ok = true;
        double vis = 0;
        for (const auto& l : scene.learners) {
          if (dot(l - s.start, s.normal) <= 0 || occluded(l, p2, std::span<const Polygon>(scene.obstacles))) {
            learners_ok = false;
            break;
          }
          const Vec3 v = Vec3{l.x, l.y, scene.eye_height_m} - p;
          vis += dot(v, n) / norm(v);
        }
        if (!learners_ok) continue;
        const Vec3 back = proj - p;
        const double cos_inc = dot(back, n) / norm(back);
        if (std::acos(std::clamp(cos_inc, -1.0, 1.0)) > cfg.max_incidence_rad) continue;
        const auto g = gimbal_oracle(scene.robot.position, scene.projector_height_m, scene.robot.heading, p);
        if (std::abs(g.pan) > cfg.pan_limit_rad || g.tilt < cfg.tilt_min_rad || g.tilt > cfg.tilt_max_rad) continue;
        const double score = cfg.weight_referent * std::exp(-norm(p - scene.referent)) +
                             cfg.weight_incidence * cos_inc +
                             cfg.weight_visibility * vis / static_cast<double>(scene.learners.size());
        if (!best || score > best->score) best = OracleCandidate{s.id, a, z, score};
      }
    }
  }
  return best;
}

// Random room: 1-3 wall segments in front of the robot, learners around
// it, 0-4 box obstacles scattered between.
inline choreo::Scene random_scene(Rng& rng) {
  choreo::Scene scene;
  scene.robot = {{uniform(rng, -1, 1), uniform(rng, -1, 1)}, uniform(rng, -3.14, 3.14)};
  scene.projector_height_m = uniform(rng, 0.8, 1.6);
  scene.eye_height_m = uniform(rng, 1.2, 1.8);
  const int n_learners = uniform_int(rng, 1, 4);
  for (int i = 0; i < n_learners; ++i) {
    scene.learners.push_back({uniform(rng, -2.5, 2.5), uniform(rng, -3.0, -1.2)});
  }
  const int n_surfaces = uniform_int(rng, 1, 3);
  for (int i = 0; i < n_surfaces; ++i) {
    choreo::Surface s;
    s.id = "s" + std::to_string(i);
    const double y = uniform(rng, 2.0, 5.0);
    const double x0 = uniform(rng, -4.0, 2.0);
    const double tilt = uniform(rng, -0.5, 0.5);
    const double len = uniform(rng, 0.5, 3.0);
    s.start = {x0, y};
    s.end = {x0 + len * std::cos(tilt), y + len * std::sin(tilt)};
    const Vec2 d = (s.end - s.start) * (1.0 / choreo::geometry::norm(s.end - s.start));
    s.normal = {d.y, -d.x};  // faces -y side (towards the learners)
    s.z_min = uniform(rng, 0.0, 1.0);
    s.z_max = s.z_min + uniform(rng, 0.3, 1.5);
    scene.surfaces.push_back(s);
  }
  const int n_obs = uniform_int(rng, 0, 4);
  for (int i = 0; i < n_obs; ++i) {
    scene.obstacles.push_back(square({uniform(rng, -3, 3), uniform(rng, 0.5, 2.0)}, uniform(rng, 0.05, 0.4)));
  }
  scene.referent = {uniform(rng, -2, 2), uniform(rng, 1.5, 4.5), uniform(rng, 0.3, 1.5)};
  scene.target_device_id = "dev";
  return scene;
}

// --- shipped sample data -------------------------------------------------------

#ifdef CHOREO_DATA_DIR
inline fs::path data_dir() { return fs::path(CHOREO_DATA_DIR); }
inline fs::path sample_library_dir() { return data_dir() / "sample_library"; }
inline fs::path sample_tour_file() { return data_dir() / "sample_tour.json"; }
inline fs::path sample_scene_file() { return data_dir() / "sample_scene.json"; }

inline choreo::AssetLibrary sample_library() {
  auto result = choreo::load_library(sample_library_dir());
  if (!result.ok()) throw std::runtime_error("sample library does not load");
  return std::move(*result.library);
}
#endif

}  // namespace testsupport
