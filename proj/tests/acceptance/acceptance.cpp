// Acceptance suite. One PASS/FAIL line per criterion:
//   choreo_acceptance --criterion N     (N in 1..6)
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

#include <CLI11.hpp>

#include "choreo/compiler.hpp"
#include "choreo/json_codec.hpp"
#include "choreo/studio.hpp"
#include "choreo/timeline_io.hpp"
#include "../support/support.hpp"

using namespace choreo;
using namespace testsupport;

namespace {

// Pinned tolerances and sizes.
constexpr double kCompileBudgetS = 5.0;
constexpr double kFuzzBudgetS = 30.0;
constexpr double kSimBudgetS = 10.0;
constexpr double kPlacementBudgetS = 60.0;
constexpr int kFuzzTours = 1000;
constexpr int kSimRuns = 200;
constexpr int kScenes = 200;
constexpr int kGimbalCases = 1000;
constexpr double kSimEpsilonMs = 1.0;
constexpr double kOracleStepM = 0.01;
constexpr double kGimbalTolRad = 1e-6;
constexpr int kNudgeAttempts = 300;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" + std::string(CHOREO_CLI_PATH) + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

// --- 1: pipeline fidelity --------------------------------------------------------

void criterion_1(Outcome& o) {
  const auto t0 = Clock::now();
  const auto library = sample_library();
  std::map<GestureKind, int> kinds;
  for (const auto& g : library.gestures) ++kinds[g.kind];
  if (library.devices.size() != 6) o.fail("library has " + std::to_string(library.devices.size()) + " devices");
  if (library.gestures.size() != 42) o.fail("library has " + std::to_string(library.gestures.size()) + " gestures");
  // 45 recorded exemplars (18/15/12) merged into 42 units: no kind may
  // exceed its exemplar count and no beat gestures exist.
  if (kinds[GestureKind::deictic] > 18 || kinds[GestureKind::iconic] > 15 || kinds[GestureKind::metaphoric] > 12 ||
      kinds[GestureKind::beat] != 0) {
    o.fail("gesture kind split out of range");
  }
  const auto tour = load_tour(sample_tour_file());
  if (tour.plan.device_ids.size() != 3) o.fail("sample tour is not a 3-device tour");

  TempDir a, b;
  const std::string common = "compile --library " + q(sample_library_dir()) + " --tour " + q(sample_tour_file());
  if (run_cli(common + " --out " + q(a.path())) != 0 || run_cli(common + " --out " + q(b.path())) != 0) {
    o.fail("compile exited non-zero");
    return;
  }
  std::set<std::string> files;
  for (const auto& e : fs::directory_iterator(a.path())) files.insert(e.path().filename().string());
  if (files != std::set<std::string>{"narration.json", "visuals.json", "gestures.json"}) {
    o.fail("output directory does not hold exactly the three timeline files");
  }
  for (const char* name : kTimelineFiles) {
    if (read_file(a.path() / name) != read_file(b.path() / name)) o.fail(std::string(name) + " differs on recompile");
  }
  const auto t = load_timeline(a.path());
  std::size_t worst = 0;
  for (const auto& seg : t.narration) {
    std::set<std::string> lps;
    if (seg.learning_point_id) lps.insert(*seg.learning_point_id);
    for (const auto* e : t.events()) {
      if (e->segment_id == seg.segment_id && e->learning_point_id) lps.insert(*e->learning_point_id);
    }
    worst = std::max(worst, lps.size());
  }
  if (worst > 1) o.fail("a segment carries " + std::to_string(worst) + " learning points");
  const double secs = seconds_since(t0);
  if (secs >= kCompileBudgetS) o.fail("took " + std::to_string(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << t.narration.size() << " segments, " << kinds[GestureKind::deictic] << "/"
           << kinds[GestureKind::iconic] << "/" << kinds[GestureKind::metaphoric] << " gestures, " << secs << " s";
}

// --- 2: alignment laws -----------------------------------------------------------

void criterion_2(Outcome& o) {
  const auto t0 = Clock::now();
  Rng rng(2024);
  std::size_t events = 0, overruns = 0;
  for (int i = 0; i < kFuzzTours; ++i) {
    auto fc = random_case(rng);
    Clients clients;
    clients.text_gen = std::make_unique<FuzzTextGen>(rng());
    clients.speech = std::make_unique<StubSpeechClient>(fc.config.speech_rate_chars_per_sec);
    CompileResult result;
    try {
      result = compile_tour(fc.library, fc.tour, fc.config, clients);
    } catch (const std::exception& e) {
      o.fail("tour " + std::to_string(i) + " failed to compile: " + e.what());
      return;
    }
    const auto report = validate_timeline(result.timeline, &fc.library);
    if (!report.clean()) {
      o.fail("tour " + std::to_string(i) + ": " + report.findings.front().code);
      return;
    }
    const auto breaks = alignment_law_breaks(result.timeline, fc.config.alignment.base_pause_ms);
    if (!breaks.empty()) {
      o.fail("tour " + std::to_string(i) + ": " + breaks.front());
      return;
    }
    events += result.timeline.events().size();
    for (const auto& n : result.timeline.narration) overruns += n.pause_after_ms > result.timeline.base_pause_ms;
  }
  const double secs = seconds_since(t0);
  if (secs >= kFuzzBudgetS) o.fail("took " + std::to_string(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << kFuzzTours << " tours, " << events << " events, " << overruns
           << " overrun pauses, " << secs << " s";
}

// --- 3: simulator exactness ------------------------------------------------------

std::vector<Timeline> sim_corpus() {
  std::vector<Timeline> out;
  const Config config;
  auto clients = make_clients(config);
  out.push_back(compile_tour(sample_library(), load_tour(sample_tour_file()), config, clients).timeline);
  Rng rng(33);
  while (out.size() < 20) {
    auto fc = random_case(rng);
    Clients c;
    c.text_gen = std::make_unique<FuzzTextGen>(rng());
    c.speech = std::make_unique<StubSpeechClient>(fc.config.speech_rate_chars_per_sec);
    out.push_back(compile_tour(fc.library, fc.tour, fc.config, c).timeline);
  }
  return out;
}

void criterion_3(Outcome& o) {
  const auto t0 = Clock::now();
  const auto corpus = sim_corpus();
  for (const auto& t : corpus) {
    SimConfig sim;
    sim.epsilon_ms = kSimEpsilonMs;
    const auto trace = simulate(t, sim);
    for (const auto& r : trace.records) {
      if (r.actual_start != r.scheduled_start || r.actual_end != r.scheduled_end) {
        o.fail("zero-jitter record " + r.event_id + " moved");
        return;
      }
    }
    if (!verify_trace(trace, t, kSimEpsilonMs).clean()) o.fail("zero-jitter trace flagged");
  }
  Rng rng(77);
  std::size_t flagged_total = 0;
  for (int run = 0; run < kSimRuns; ++run) {
    const auto& t = corpus[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(corpus.size()) - 1))];
    SimConfig sim;
    sim.seed = rng();
    sim.jitter = {uniform_int(rng, 0, 3) == 0 ? 0 : uniform_int(rng, 1, 400),
                  uniform_int(rng, 0, 3) == 0 ? 0 : uniform_int(rng, 1, 400),
                  uniform_int(rng, 0, 3) == 0 ? 0 : uniform_int(rng, 1, 400)};
    sim.epsilon_ms = uniform_int(rng, 0, 1) ? kSimEpsilonMs : static_cast<double>(uniform_int(rng, 0, 300));
    const auto trace = simulate(t, sim);
    const auto expected = expected_actuals(t, sim);
    std::set<std::string> want;
    for (const auto* e : t.events()) {
      const auto& [s, f] = expected.at(e->id);
      if (std::abs(static_cast<double>(s - e->start_ms)) > sim.epsilon_ms ||
          std::abs(static_cast<double>(f - e->end_ms)) > sim.epsilon_ms) {
        want.insert(e->id);
      }
    }
    std::set<std::string> got;
    for (const auto& f : verify_trace(trace, t, sim.epsilon_ms).findings) {
      if (f.kind == TraceFinding::Kind::overlap) {
        o.fail("run " + std::to_string(run) + ": overlap flagged under the delay policy");
        return;
      }
      got.insert(f.event_ids.begin(), f.event_ids.end());
    }
    if (got != want) {
      o.fail("run " + std::to_string(run) + ": flagged " + std::to_string(got.size()) + " records, oracle " +
             std::to_string(want.size()));
      return;
    }
    flagged_total += got.size();
  }
  const double secs = seconds_since(t0);
  if (secs >= kSimBudgetS) o.fail("took " + std::to_string(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << corpus.size() << " zero-jitter timelines, " << kSimRuns << " jittered runs, "
           << flagged_total << " flags matched, " << secs << " s";
}

// --- 4: placement correctness ---------------------------------------------------

// Every filter recomputed from its definition, occlusion by 1 mm sampling.
std::string independent_recheck(const Scene& scene, const PlacementConfig& cfg, const PlacementResult& r) {
  using namespace geometry;
  const Surface* s = nullptr;
  for (const auto& cand : scene.surfaces) {
    if (cand.id == r.surface_id) s = &cand;
  }
  if (s == nullptr) return "unknown surface";
  const double len = norm(s->end - s->start);
  const Vec2 dir = (s->end - s->start) * (1.0 / len);
  const Vec2 on = s->start + dir * r.along_m;
  if (std::hypot(on.x - r.point.x, on.y - r.point.y) > 1e-9 || r.along_m < -1e-9 || r.along_m > len + 1e-9 ||
      r.height_m < s->z_min - 1e-9 || r.height_m > s->z_max + 1e-9 || std::abs(r.point.z - r.height_m) > 1e-9) {
    return "point off its surface";
  }
  const Vec2 plan{r.point.x, r.point.y};
  if (sampled_occluded(scene.robot.position, plan, scene.obstacles)) return "projector ray occluded";
  for (const auto& l : scene.learners) {
    if (dot(l - s->start, s->normal) <= 0) return "learner behind surface";
    if (sampled_occluded(l, plan, scene.obstacles)) return "learner sightline occluded";
  }
  const Vec3 proj{scene.robot.position.x, scene.robot.position.y, scene.projector_height_m};
  const Vec3 back = proj - r.point;
  const double inc = std::acos(std::clamp((back.x * s->normal.x + back.y * s->normal.y) / norm(back), -1.0, 1.0));
  if (inc > cfg.max_incidence_rad + 1e-12) return "incidence over limit";
  const auto g = gimbal_oracle(scene.robot.position, scene.projector_height_m, scene.robot.heading, r.point);
  if (std::abs(g.pan) > cfg.pan_limit_rad + 1e-12 || g.tilt < cfg.tilt_min_rad - 1e-12 ||
      g.tilt > cfg.tilt_max_rad + 1e-12) {
    return "outside gimbal limits";
  }
  return {};
}

void criterion_4(Outcome& o) {
  const auto t0 = Clock::now();
  Rng rng(404);
  const PlacementConfig cfg;
  const double cell = cfg.grid_step_m + 1e-9;
  int feasible = 0, infeasible = 0;
  for (int i = 0; i < kScenes; ++i) {
    const auto scene = random_scene(rng);
    const auto oracle = brute_force_placement(scene, cfg, kOracleStepM);
    std::optional<PlacementResult> got;
    try {
      got = solve_placement(scene, cfg);
    } catch (const PlacementInfeasible&) {
    }
    const std::string tag = "scene " + std::to_string(i) + ": ";
    if (!got) {
      ++infeasible;
      if (oracle) o.fail(tag + "solver infeasible, oracle found " + oracle->surface_id);
      continue;
    }
    ++feasible;
    if (const auto why = independent_recheck(scene, cfg, *got); !why.empty()) o.fail(tag + why);
    if (!oracle) {
      o.fail(tag + "oracle infeasible, solver returned a placement");
      continue;
    }
    if (oracle->surface_id != got->surface_id || std::abs(oracle->along - got->along_m) > cell ||
        std::abs(oracle->height - got->height_m) > cell) {
      std::ostringstream m;
      m << tag << "solver " << got->surface_id << "@(" << got->along_m << "," << got->height_m << ") vs oracle "
        << oracle->surface_id << "@(" << oracle->along << "," << oracle->height << ")";
      o.fail(m.str());
    }
  }
  double worst = 0;
  for (int i = 0; i < kGimbalCases; ++i) {
    const geometry::Vec2 p{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    const double h = uniform(rng, 0.2, 2.0);
    const double heading = uniform(rng, -geometry::kPi, geometry::kPi);
    const geometry::Vec3 t{uniform(rng, -6, 6), uniform(rng, -6, 6), uniform(rng, 0, 3)};
    const auto got = gimbal_angles(p, h, heading, t);
    const auto want = gimbal_oracle(p, h, heading, t);
    worst = std::max({worst, std::abs(geometry::wrap_angle(got.pan_rad - want.pan)), std::abs(got.tilt_rad - want.tilt)});
  }
  if (worst > kGimbalTolRad) o.fail("gimbal error " + std::to_string(worst) + " rad");
  const double secs = seconds_since(t0);
  if (secs >= kPlacementBudgetS) o.fail("took " + std::to_string(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << feasible << " feasible / " << infeasible << " infeasible scenes, gimbal max err "
           << worst << " rad, " << secs << " s";
}

// --- 5: round trip and nudge safety ---------------------------------------------

void criterion_5(Outcome& o) {
  auto corpus = sim_corpus();
  for (const auto& t : corpus) {
    if (codec::timeline_from_documents(codec::to_documents(t)) != t) o.fail("document round trip differs");
    TempDir dir;
    emit(t, dir.path());
    if (load_timeline(dir.path()) != t) o.fail("file round trip differs");
  }

  TempDir out;
  Studio::Options options;
  options.library_dir = sample_library_dir();
  options.tour_file = sample_tour_file();
  options.out_dir = out.path();
  Timeline final_view;
  std::vector<Nudge> final_nudges;
  int accepted = 0, rejected = 0;
  {
    Studio studio(options);
    Rng rng(55);
    for (int i = 0; i < kNudgeAttempts; ++i) {
      const auto before = studio.timeline();
      const auto events = before.events();
      const auto* e = events[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(events.size()) - 1))];
      const auto r = studio.nudge(e->id, uniform_int(rng, -kMaxNudgeMs, kMaxNudgeMs));
      if (r.status == NudgeOutcome::Status::accepted) {
        ++accepted;
      } else {
        ++rejected;
        if (studio.timeline() != before) o.fail("a refused nudge changed the timeline");
      }
      if (!validate_timeline(studio.timeline()).clean()) {
        o.fail("validator not clean after nudge " + std::to_string(i));
        break;
      }
    }
    final_view = studio.timeline();
    final_nudges = studio.nudges();
  }
  Studio restarted(options);
  if (restarted.timeline() != final_view || restarted.nudges() != final_nudges) {
    o.fail("overrides lost across restart");
  }
  if (accepted == 0) o.fail("no nudge was accepted");
  o.detail << (o.pass ? "" : "; ") << corpus.size() << " timelines round-tripped, " << accepted << " nudges accepted, "
           << rejected << " refused, " << final_nudges.size() << " restored after restart";
}

// --- 6: coverage warnings -------------------------------------------------------

void criterion_6(Outcome& o) {
  const auto library = sample_library();
  const auto tour = load_tour(sample_tour_file());
  const Config config;
  auto clients = make_clients(config);
  const auto base = compile_tour(library, tour, config, clients);
  if (base.report.warning_count() != 0) o.fail("sample compile already warns");

  // Every selected visual that is the only image of its learning point.
  std::vector<const VisualEvent*> sole;
  for (const auto& v : base.timeline.visuals) {
    if (v.learning_point_id && query_visuals(library, *v.learning_point_id).size() == 1) sole.push_back(&v);
  }
  if (sole.empty()) o.fail("no selected sole visual to delete");
  for (const auto* v : sole) {
    TempDir dir;
    fs::copy(sample_library_dir(), dir.path(), fs::copy_options::recursive);
    auto doc = read_json_file(dir.path() / "visuals.json");
    auto& items = doc["visuals"];
    for (auto it = items.begin(); it != items.end(); ++it) {
      if ((*it)["id"] == v->ref) {
        items.erase(it);
        break;
      }
    }
    write_json_file(dir.path() / "visuals.json", doc);
    auto reduced = load_library(dir.path());
    if (!reduced.ok()) {
      o.fail("library without " + v->ref + " does not load");
      continue;
    }
    auto c = make_clients(config);
    CompileResult result;
    try {
      result = compile_tour(*reduced.library, tour, config, c);
    } catch (const std::exception& e) {
      o.fail("compile without " + v->ref + " failed: " + e.what());
      continue;
    }
    bool named = false;
    for (const auto& f : result.report.findings) {
      named |= f.severity == Finding::Severity::warning && f.learning_point_id == *v->learning_point_id;
    }
    if (!named) o.fail("no coverage warning names " + *v->learning_point_id + " after deleting " + v->ref);
  }
  o.detail << (o.pass ? "" : "; ") << sole.size() << " sole visuals deleted one at a time, each warned";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "Criterion number")->required()->check(CLI::Range(1, 6));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<const char*, std::function<void(Outcome&)>>> table = {
      {1, {"pipeline fidelity", criterion_1}},   {2, {"alignment laws", criterion_2}},
      {3, {"simulator exactness", criterion_3}}, {4, {"placement correctness", criterion_4}},
      {5, {"round trip and nudge safety", criterion_5}}, {6, {"coverage warnings", criterion_6}},
  };
  const auto& [name, check] = table.at(criterion);
  Outcome o;
  try {
    check(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  std::cout << "criterion " << criterion << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << " - "
            << o.detail.str() << '\n';
  return o.pass ? 0 : 1;
}
