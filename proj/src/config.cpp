#include "choreo/config.hpp"

#include <fstream>
#include <set>

#include "choreo/error.hpp"

namespace choreo {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::invalid_input, "config " + path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) bad(path, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) bad(path + "/" + key, "unknown key");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) throw std::invalid_argument("expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw std::invalid_argument("expected an integer");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw std::invalid_argument("expected a string");
    }
    out = it->get<T>();
  } catch (const std::exception& e) {
    bad(path + "/" + key, e.what());
  }
}

void read_endpoint(const json& obj, const std::string& path, ClientEndpoint& ep,
                   std::initializer_list<const char*> kinds) {
  read(obj, "client", path, ep.kind);
  read(obj, "endpoint", path, ep.endpoint);
  read(obj, "timeout_s", path, ep.timeout_s);
  bool known = false;
  for (const char* k : kinds) known = known || ep.kind == k;
  if (!known) bad(path + "/client", "unsupported client '" + ep.kind + "'");
  if (ep.kind == "http" && ep.endpoint.rfind("http://", 0) != 0) {
    bad(path + "/endpoint", "http clients need an http:// endpoint");
  }
}

}  // namespace

Config config_from_json(const json& doc) {
  Config c;
  if (doc.is_null()) return c;
  only_keys(doc, "", {"text_gen", "speech", "segmentation", "composer", "alignment", "placement", "simulation"});

  if (auto it = doc.find("text_gen"); it != doc.end()) {
    const std::string p = "/text_gen";
    only_keys(*it, p, {"client", "endpoint", "timeout_s", "n_variants", "transition_phrases", "analogy_hints",
                       "target_minutes"});
    read_endpoint(*it, p, c.text_gen, {"stub", "http"});
    read(*it, "n_variants", p, c.n_variants);
    if (c.n_variants < 1) bad(p + "/n_variants", "must be >= 1");
    read(*it, "transition_phrases", p, c.techniques.transition_phrases);
    read(*it, "analogy_hints", p, c.techniques.analogy_hints);
    if (auto tm = it->find("target_minutes"); tm != it->end()) {
      if (!tm->is_array() || tm->size() != 2 || !(*tm)[0].is_number() || !(*tm)[1].is_number()) {
        bad(p + "/target_minutes", "expected [min, max]");
      }
      c.techniques.target_minutes_min = (*tm)[0].get<double>();
      c.techniques.target_minutes_max = (*tm)[1].get<double>();
    }
  }
  if (auto it = doc.find("speech"); it != doc.end()) {
    const std::string p = "/speech";
    only_keys(*it, p, {"client", "endpoint", "timeout_s", "rate_chars_per_sec", "max_concurrency"});
    read_endpoint(*it, p, c.speech, {"stub", "http"});
    read(*it, "rate_chars_per_sec", p, c.speech_rate_chars_per_sec);
    if (!(c.speech_rate_chars_per_sec > 0.0)) bad(p + "/rate_chars_per_sec", "must be > 0");
    read(*it, "max_concurrency", p, c.speech_max_concurrency);
    if (c.speech_max_concurrency < 1) bad(p + "/max_concurrency", "must be >= 1");
  }
  if (auto it = doc.find("segmentation"); it != doc.end()) {
    only_keys(*it, "/segmentation", {"terminators"});
    read(*it, "terminators", "/segmentation", c.segmentation.terminators);
    if (c.segmentation.terminators.empty()) bad("/segmentation/terminators", "must not be empty");
    c.alignment.terminators = c.segmentation.terminators;
  }
  if (auto it = doc.find("composer"); it != doc.end()) {
    const std::string p = "/composer";
    only_keys(*it, p, {"client", "endpoint", "timeout_s", "max_gestures_per_segment"});
    read_endpoint(*it, p, c.composer, {"rule", "http"});
    read(*it, "max_gestures_per_segment", p, c.composer_options.max_gestures_per_segment);
    if (c.composer_options.max_gestures_per_segment < 0) bad(p + "/max_gestures_per_segment", "must be >= 0");
  }
  if (auto it = doc.find("alignment"); it != doc.end()) {
    const std::string p = "/alignment";
    only_keys(*it, p, {"base_pause_ms", "max_pause_extension_ms"});
    read(*it, "base_pause_ms", p, c.alignment.base_pause_ms);
    if (c.alignment.base_pause_ms < 0) bad(p + "/base_pause_ms", "must be >= 0");
    if (auto m = it->find("max_pause_extension_ms"); m != it->end() && !m->is_null()) {
      std::int64_t v = 0;
      read(*it, "max_pause_extension_ms", p, v);
      if (v < 0) bad(p + "/max_pause_extension_ms", "must be >= 0");
      c.alignment.max_pause_extension_ms = v;
    }
  }
  if (auto it = doc.find("placement"); it != doc.end()) {
    const std::string p = "/placement";
    only_keys(*it, p, {"grid_step_m", "weight_referent", "weight_incidence", "weight_visibility",
                       "max_incidence_rad", "pan_limit_rad", "tilt_min_rad", "tilt_max_rad"});
    auto& pc = c.placement;
    read(*it, "grid_step_m", p, pc.grid_step_m);
    read(*it, "weight_referent", p, pc.weight_referent);
    read(*it, "weight_incidence", p, pc.weight_incidence);
    read(*it, "weight_visibility", p, pc.weight_visibility);
    read(*it, "max_incidence_rad", p, pc.max_incidence_rad);
    read(*it, "pan_limit_rad", p, pc.pan_limit_rad);
    read(*it, "tilt_min_rad", p, pc.tilt_min_rad);
    read(*it, "tilt_max_rad", p, pc.tilt_max_rad);
    if (!(pc.grid_step_m > 0.0)) bad(p + "/grid_step_m", "must be > 0");
    if (pc.tilt_min_rad > pc.tilt_max_rad) bad(p + "/tilt_min_rad", "must not exceed tilt_max_rad");
  }
  if (auto it = doc.find("simulation"); it != doc.end()) {
    const std::string p = "/simulation";
    only_keys(*it, p, {"seed", "jitter_ms", "epsilon_ms"});
    read(*it, "seed", p, c.simulation.seed);
    read(*it, "epsilon_ms", p, c.simulation.epsilon_ms);
    if (!(c.simulation.epsilon_ms >= 0.0)) bad(p + "/epsilon_ms", "must be >= 0");
    if (auto j = it->find("jitter_ms"); j != it->end()) {
      only_keys(*j, p + "/jitter_ms", {"speech", "visual", "gesture"});
      read(*j, "speech", p + "/jitter_ms", c.simulation.jitter.speech_ms);
      read(*j, "visual", p + "/jitter_ms", c.simulation.jitter.visual_ms);
      read(*j, "gesture", p + "/jitter_ms", c.simulation.jitter.gesture_ms);
      const auto& jb = c.simulation.jitter;
      if (jb.speech_ms < 0 || jb.visual_ms < 0 || jb.gesture_ms < 0) bad(p + "/jitter_ms", "bounds must be >= 0");
    }
  }
  return c;
}

Config load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::io, "cannot read config " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, "config " + file.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

nlohmann::ordered_json to_json(const Config& c) {
  nlohmann::ordered_json j;
  auto endpoint = [](const ClientEndpoint& ep) {
    nlohmann::ordered_json e;
    e["client"] = ep.kind;
    e["endpoint"] = ep.endpoint;
    e["timeout_s"] = ep.timeout_s;
    return e;
  };
  auto tg = endpoint(c.text_gen);
  tg["n_variants"] = c.n_variants;
  tg["transition_phrases"] = c.techniques.transition_phrases;
  tg["analogy_hints"] = c.techniques.analogy_hints;
  tg["target_minutes"] = {c.techniques.target_minutes_min, c.techniques.target_minutes_max};
  j["text_gen"] = tg;
  auto sp = endpoint(c.speech);
  sp["rate_chars_per_sec"] = c.speech_rate_chars_per_sec;
  sp["max_concurrency"] = c.speech_max_concurrency;
  j["speech"] = sp;
  j["segmentation"] = {{"terminators", c.segmentation.terminators}};
  auto co = endpoint(c.composer);
  co["max_gestures_per_segment"] = c.composer_options.max_gestures_per_segment;
  j["composer"] = co;
  j["alignment"] = {{"base_pause_ms", c.alignment.base_pause_ms},
                    {"max_pause_extension_ms", c.alignment.max_pause_extension_ms
                                                   ? nlohmann::ordered_json(*c.alignment.max_pause_extension_ms)
                                                   : nlohmann::ordered_json(nullptr)}};
  const auto& pc = c.placement;
  j["placement"] = {{"grid_step_m", pc.grid_step_m},         {"weight_referent", pc.weight_referent},
                    {"weight_incidence", pc.weight_incidence}, {"weight_visibility", pc.weight_visibility},
                    {"max_incidence_rad", pc.max_incidence_rad}, {"pan_limit_rad", pc.pan_limit_rad},
                    {"tilt_min_rad", pc.tilt_min_rad},         {"tilt_max_rad", pc.tilt_max_rad}};
  j["simulation"] = {{"seed", c.simulation.seed},
                     {"jitter_ms",
                      {{"speech", c.simulation.jitter.speech_ms},
                       {"visual", c.simulation.jitter.visual_ms},
                       {"gesture", c.simulation.jitter.gesture_ms}}},
                     {"epsilon_ms", c.simulation.epsilon_ms}};
  return j;
}

}  // namespace choreo
