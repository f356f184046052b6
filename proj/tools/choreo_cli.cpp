// choreo: compile, check, simulate and serve robot tour choreographies.
//
// Exit codes:
//   validate  0 no errors (warnings allowed), 1 errors found, 2 usage or missing directory
//   compile   0 ok, 1 a pipeline stage failed, 2 usage or unreadable input
//   simulate  0 trace matches schedule, 1 timeline invalid (not simulated),
//             2 usage or unreadable input, 3 deviations or overlaps found
//   place     0 placement found, 1 infeasible, 2 usage or unreadable input
//   serve     runs until interrupted; 2 when startup fails
//   config    0 ok, 2 unreadable config
#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "choreo/compiler.hpp"
#include "choreo/json_codec.hpp"
#include "choreo/server.hpp"
#include "choreo/studio.hpp"
#include "choreo/timeline_io.hpp"

namespace fs = std::filesystem;
using namespace choreo;

namespace {

constexpr int kUsage = 2;

void print(const nlohmann::ordered_json& doc) { std::cout << doc.dump(2) << '\n'; }

Config config_or_default(const std::string& path) { return path.empty() ? Config{} : load_config(path); }

int cmd_validate(const std::string& library_dir) {
  const auto result = load_library(library_dir);
  nlohmann::ordered_json report;
  report["ok"] = result.ok();
  report["errors"] = result.error_count();
  report["warnings"] = result.warning_count();
  report["issues"] = codec::to_json(result.issues);
  print(report);
  if (std::any_of(result.issues.begin(), result.issues.end(),
                  [](const LoadIssue& i) { return i.code == "missing_directory"; })) {
    return kUsage;
  }
  return result.ok() ? 0 : 1;
}

AssetLibrary library_or_throw(const std::string& dir) {
  auto result = load_library(dir);
  if (!result.ok()) {
    for (const auto& issue : result.issues) {
      std::cerr << issue.file << issue.key_path << ": " << issue.code << ": " << issue.message << '\n';
    }
    throw Error(ErrorCode::invalid_input, "library '" + dir + "' has errors");
  }
  return std::move(*result.library);
}

int cmd_compile(const std::string& library_dir, const std::string& tour_file, const std::string& config_file,
                const std::string& out_dir, const std::optional<std::string>& variant) {
  AssetLibrary library;
  TourSpec tour;
  Config config;
  try {
    library = library_or_throw(library_dir);
    tour = load_tour(tour_file);
    config = config_or_default(config_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    auto clients = make_clients(config);
    const auto result = compile_tour(library, tour, config, clients, variant);
    emit(result.timeline, out_dir);
    print(compile_summary(result));
    return 0;
  } catch (const CompileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::io ? kUsage : 1;
  }
}

int cmd_simulate(const std::string& timeline_dir, const std::string& config_file, std::optional<std::uint64_t> seed,
                 std::optional<std::int64_t> jitter, std::optional<double> epsilon, const std::string& out_file) {
  Timeline timeline;
  SimConfig sim;
  try {
    timeline = load_timeline(timeline_dir);
    sim = config_or_default(config_file).simulation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (seed) sim.seed = *seed;
  if (jitter) sim.jitter = {*jitter, *jitter, *jitter};
  if (epsilon) sim.epsilon_ms = *epsilon;

  const auto validation = validate_timeline(timeline);
  if (validation.violation_count() > 0) {
    nlohmann::ordered_json doc;
    doc["simulated"] = false;
    doc["validation"] = codec::to_json(validation);
    print(doc);
    return 1;
  }
  const auto trace = simulate(timeline, sim);
  const auto report = verify_trace(trace, timeline, sim.epsilon_ms);
  try {
    if (!out_file.empty()) write_json_file(out_file, codec::to_json(trace));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  nlohmann::ordered_json doc;
  doc["simulated"] = true;
  doc["records"] = trace.records.size();
  doc["report"] = codec::to_json(report);
  print(doc);
  return report.clean() ? 0 : 3;
}

int cmd_place(const std::string& scene_file, const std::string& config_file, const std::string& out_file) {
  Scene scene;
  Config config;
  try {
    scene = codec::scene_from_json(read_json_file(scene_file));
    config = config_or_default(config_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    const auto result = solve_placement(scene, config.placement);
    const auto doc = codec::to_json(result);
    if (!out_file.empty()) write_json_file(out_file, doc);
    print(doc);
    return 0;
  } catch (const PlacementInfeasible& e) {
    const auto& c = e.counts();
    nlohmann::ordered_json doc;
    doc["error"] = "infeasible";
    doc["rejections"] = {{"candidates", c.candidates},
                         {"projector_occluded", c.projector_occluded},
                         {"learner_occluded", c.learner_occluded},
                         {"incidence", c.incidence},
                         {"gimbal", c.gimbal}};
    print(doc);
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

StudioServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(Studio::Options options, const std::string& host, int port, const std::optional<std::string>& static_dir) {
  std::unique_ptr<Studio> studio;
  try {
    studio = std::make_unique<Studio>(std::move(options));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::optional<fs::path> mount;
  if (static_dir) mount = *static_dir;
  StudioServer server(*studio, mount);
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
    if (bound < 0) {
      std::cerr << "error: cannot bind " << host << '\n';
      return kUsage;
    }
  } else if (!server.bind(host, port)) {
    std::cerr << "error: cannot bind " << host << ':' << port << '\n';
    return kUsage;
  }
  std::cout << "listening on http://" << host << ':' << bound << '\n' << std::flush;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen_after_bind();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile and check multimodal robot tour choreographies"};
  app.require_subcommand(1);

  std::string library_dir, tour_file, config_file, out_dir, timeline_dir, scene_file, out_file;
  std::optional<std::string> variant, static_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> jitter;
  std::optional<double> epsilon;
  std::string host = "127.0.0.1";
  int port = 8080;

  auto* validate = app.add_subcommand("validate", "Load an asset library and report integrity issues");
  validate->add_option("library", library_dir, "Library directory")->required();

  auto* compile = app.add_subcommand("compile", "Compile a tour into narration/visuals/gestures timeline files");
  compile->add_option("--library", library_dir, "Library directory")->required();
  compile->add_option("--tour", tour_file, "Tour file")->required();
  compile->add_option("--config", config_file, "Config file (defaults apply when omitted)");
  compile->add_option("--out", out_dir, "Output directory")->required();
  compile->add_option("--variant", variant, "Script variant label to compile (default: tour's, else first)");

  auto* sim = app.add_subcommand("simulate", "Replay a compiled timeline on a virtual clock");
  sim->add_option("--timeline", timeline_dir, "Directory holding the three timeline files")->required();
  sim->add_option("--config", config_file, "Config file (simulation section)");
  sim->add_option("--seed", seed, "Jitter RNG seed");
  sim->add_option("--jitter", jitter, "Jitter bound in ms for every channel")->check(CLI::NonNegativeNumber);
  sim->add_option("--epsilon", epsilon, "Verification tolerance in ms")->check(CLI::NonNegativeNumber);
  sim->add_option("--out", out_file, "Write the trace here");

  auto* place = app.add_subcommand("place", "Solve projection placement for a scene");
  place->add_option("--scene", scene_file, "Scene file")->required();
  place->add_option("--config", config_file, "Config file (placement section)");
  place->add_option("--out", out_file, "Write the result here");

  auto* show_config = app.add_subcommand("config", "Print the effective configuration (defaults when no file)");
  show_config->add_option("--config", config_file, "Config file to merge over the defaults");

  auto* serve = app.add_subcommand("serve", "Run the local preview-and-nudge HTTP service");
  serve->add_option("--library", library_dir, "Library directory")->required();
  serve->add_option("--tour", tour_file, "Tour file")->required();
  serve->add_option("--out", out_dir, "Output directory (timeline files and overrides)")->required();
  serve->add_option("--config", config_file, "Config file");
  serve->add_option("--scene", scene_file, "Scene file for /api/scene and /api/placement");
  serve->add_option("--static", static_dir, "Directory with the studio UI bundle");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (*validate) return cmd_validate(library_dir);
  if (*compile) return cmd_compile(library_dir, tour_file, config_file, out_dir, variant);
  if (*sim) return cmd_simulate(timeline_dir, config_file, seed, jitter, epsilon, out_file);
  if (*place) return cmd_place(scene_file, config_file, out_file);
  if (*show_config) {
    try {
      print(to_json(config_or_default(config_file)));
      return 0;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  if (*serve) {
    Studio::Options options;
    options.library_dir = library_dir;
    options.tour_file = tour_file;
    options.out_dir = out_dir;
    if (!scene_file.empty()) options.scene_file = scene_file;
    try {
      options.config = config_or_default(config_file);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    }
    return cmd_serve(std::move(options), host, port, static_dir);
  }
  return kUsage;
}
