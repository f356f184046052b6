// JSON documents cross the boundary as strings; the Python package wraps
// them into dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "choreo/compiler.hpp"
#include "choreo/json_codec.hpp"
#include "choreo/timeline_io.hpp"

namespace py = pybind11;
using namespace choreo;

namespace {

codec::Json parse(const std::string& text, const char* what) {
  try {
    return codec::Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_input, std::string(what) + " is not valid JSON: " + e.what());
  }
}

Config config_or_default(const std::string& config_json) {
  return config_json.empty() ? Config{} : config_from_json(nlohmann::json::parse(config_json));
}

std::string library_report(const std::string& dir) {
  const auto result = load_library(dir);
  codec::Json j;
  j["ok"] = result.ok();
  j["errors"] = result.error_count();
  j["warnings"] = result.warning_count();
  j["issues"] = codec::to_json(result.issues);
  return j.dump();
}

std::string compile(const std::string& library_dir, const std::string& tour_file, const std::string& config_json,
                    const std::string& variant) {
  auto loaded = load_library(library_dir);
  if (!loaded.ok()) {
    const auto& first = loaded.issues.front();
    throw Error(ErrorCode::invalid_input, "library has errors: " + first.file + first.key_path + ": " + first.message);
  }
  const auto tour = load_tour(tour_file);
  const auto config = config_or_default(config_json);
  auto clients = make_clients(config);
  const auto result = compile_tour(*loaded.library, tour, config, clients,
                                   variant.empty() ? std::nullopt : std::optional<std::string>(variant));
  codec::Json j;
  j["summary"] = compile_summary(result);
  j["timeline"] = codec::to_json(result.timeline);
  return j.dump();
}

std::string run_simulation(const std::string& timeline_json, std::uint64_t seed, std::int64_t jitter_speech,
                           std::int64_t jitter_visual, std::int64_t jitter_gesture, double epsilon_ms) {
  const auto timeline = codec::timeline_from_json(parse(timeline_json, "timeline"));
  SimConfig sim;
  sim.seed = seed;
  sim.jitter = {jitter_speech, jitter_visual, jitter_gesture};
  sim.epsilon_ms = epsilon_ms;
  const auto trace = simulate(timeline, sim);
  codec::Json j;
  j["trace"] = codec::to_json(trace);
  j["report"] = codec::to_json(verify_trace(trace, timeline, epsilon_ms));
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_choreo, m) {
  m.doc() = "Compile, check and simulate multimodal robot tour choreographies.";

  // Owned by the module for the lifetime of the process. args are
  // (code, message), e.g. ("invalid_input", "...").
  static PyObject* error = PyErr_NewException("choreo._choreo.ChoreoError", PyExc_RuntimeError, nullptr);
  static PyObject* infeasible = PyErr_NewException("choreo._choreo.PlacementInfeasible", error, nullptr);
  m.attr("ChoreoError") = py::handle(error);
  m.attr("PlacementInfeasible") = py::handle(infeasible);
  py::register_exception_translator([](std::exception_ptr p) {
    auto raise = [](PyObject* type, std::string_view code, const char* what) {
      PyErr_SetObject(type, py::make_tuple(std::string(code), what).ptr());
    };
    try {
      if (p) std::rethrow_exception(p);
    } catch (const PlacementInfeasible& e) {
      raise(infeasible, to_string(e.code()), e.what());
    } catch (const Error& e) {
      raise(error, to_string(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
      raise(error, "invalid_input", e.what());
    }
  });

  m.def("load_library", &library_report, py::arg("library_dir"),
        "Integrity report for an asset library directory.");
  m.def("compile_tour", &compile, py::arg("library_dir"), py::arg("tour_file"), py::arg("config_json") = "",
        py::arg("variant") = "", py::call_guard<py::gil_scoped_release>(),
        "Compile a tour; returns {summary, timeline}.");
  m.def("default_config", [] { return to_json(Config{}).dump(); });
  m.def(
      "validate_timeline",
      [](const std::string& timeline_json) {
        return codec::to_json(validate_timeline(codec::timeline_from_json(parse(timeline_json, "timeline")))).dump();
      },
      py::arg("timeline_json"));
  m.def(
      "apply_nudge",
      [](const std::string& timeline_json, const std::string& event_id, std::int64_t delta_ms) {
        const auto t = codec::timeline_from_json(parse(timeline_json, "timeline"));
        return codec::to_json(apply_nudge(t, event_id, delta_ms)).dump();
      },
      py::arg("timeline_json"), py::arg("event_id"), py::arg("delta_ms"));
  m.def(
      "emit",
      [](const std::string& timeline_json, const std::string& out_dir) {
        std::vector<std::string> out;
        for (const auto& p : emit(codec::timeline_from_json(parse(timeline_json, "timeline")), out_dir)) {
          out.push_back(p.string());
        }
        return out;
      },
      py::arg("timeline_json"), py::arg("out_dir"));
  m.def(
      "load_timeline", [](const std::string& dir) { return codec::to_json(load_timeline(dir)).dump(); },
      py::arg("timeline_dir"));
  m.def("simulate", &run_simulation, py::arg("timeline_json"), py::arg("seed") = 0, py::arg("jitter_speech") = 0,
        py::arg("jitter_visual") = 0, py::arg("jitter_gesture") = 0, py::arg("epsilon_ms") = 1.0,
        "Replay on a virtual clock; returns {trace, report}.");
  m.def(
      "solve_placement",
      [](const std::string& scene_json, const std::string& config_json) {
        const auto scene = codec::scene_from_json(parse(scene_json, "scene"));
        return codec::to_json(solve_placement(scene, config_or_default(config_json).placement)).dump();
      },
      py::arg("scene_json"), py::arg("config_json") = "");
  m.def(
      "gimbal_angles",
      [](std::pair<double, double> projector, double height, double heading, std::tuple<double, double, double> target) {
        const auto g = gimbal_angles({projector.first, projector.second}, height, heading,
                                     {std::get<0>(target), std::get<1>(target), std::get<2>(target)});
        return std::make_pair(g.pan_rad, g.tilt_rad);
      },
      py::arg("projector"), py::arg("height"), py::arg("heading"), py::arg("target"));
}
