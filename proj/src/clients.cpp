#include "choreo/clients.hpp"

#include <httplib.h>

#include "choreo/json_codec.hpp"

namespace choreo {

namespace {

struct Url {
  std::string host_port;  // scheme://host:port
  std::string path;
};

Url split_url(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  const auto path_start = endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

nlohmann::json post(const ClientEndpoint& ep, const codec::Json& body) {
  const auto url = split_url(ep.endpoint);
  httplib::Client client(url.host_port);
  client.set_connection_timeout(ep.timeout_s, 0);
  client.set_read_timeout(ep.timeout_s, 0);
  auto res = client.Post(url.path, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::client_failure,
                "POST " + ep.endpoint + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::client_failure, "POST " + ep.endpoint + " returned HTTP " + std::to_string(res->status));
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::client_failure, "POST " + ep.endpoint + " returned invalid JSON: " + e.what());
  }
}

}  // namespace

HttpTextGenClient::HttpTextGenClient(ClientEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

std::vector<AnnotatedScript> HttpTextGenClient::generate(const GenerationRequest& request, int n_variants) {
  codec::Json body;
  body["request"] = codec::to_json(request);
  body["n_variants"] = n_variants;
  const auto reply = post(endpoint_, body);
  if (!reply.contains("scripts") || !reply["scripts"].is_array()) {
    throw Error(ErrorCode::client_failure, "text generation reply lacks a scripts array");
  }
  std::vector<AnnotatedScript> out;
  for (const auto& s : reply["scripts"]) out.push_back(codec::script_from_json(codec::Json(s)));
  return out;
}

HttpSpeechClient::HttpSpeechClient(ClientEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

SpeechAudio HttpSpeechClient::synthesize(std::string_view text) {
  codec::Json body;
  body["text"] = std::string(text);
  const auto reply = post(endpoint_, body);
  if (!reply.contains("audio_ref") || !reply["audio_ref"].is_string() || !reply.contains("duration_ms") ||
      !reply["duration_ms"].is_number_integer()) {
    throw Error(ErrorCode::client_failure, "speech reply needs audio_ref and integer duration_ms");
  }
  return {reply["audio_ref"].get<std::string>(), reply["duration_ms"].get<std::int64_t>()};
}

HttpComposerClient::HttpComposerClient(ClientEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

Selection HttpComposerClient::propose(const SpeechSegment& segment, const std::vector<VisualAsset>& visuals,
                                      const std::vector<GestureUnit>& gestures) {
  codec::Json body;
  body["segment"] = {{"id", segment.id},
                     {"device_id", segment.device_id},
                     {"learning_point_id", segment.learning_point_id.value_or("")},
                     {"text", segment.text},
                     {"duration_ms", segment.duration_ms}};
  codec::Json vis = codec::Json::array();
  for (const auto& v : visuals) vis.push_back({{"id", v.id}, {"description", v.description}, {"rank", v.sequence_rank}});
  codec::Json ges = codec::Json::array();
  for (const auto& g : gestures) {
    ges.push_back({{"id", g.id}, {"kind", std::string(to_string(g.kind))}, {"description", g.description},
                   {"duration_ms", g.duration_ms}});
  }
  body["visuals"] = std::move(vis);
  body["gestures"] = std::move(ges);
  const auto reply = post(endpoint_, body);
  Selection sel;
  sel.segment_id = segment.id;
  try {
    for (const auto& id : reply.at("visuals")) {
      VisualAsset v;
      v.id = id.get<std::string>();
      sel.visuals.push_back(std::move(v));
    }
    for (const auto& id : reply.at("gestures")) {
      GestureUnit g;
      g.id = id.get<std::string>();
      sel.gestures.push_back(std::move(g));
    }
    sel.rationale = reply.value("rationale", "");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::client_failure, std::string("composer reply malformed: ") + e.what());
  }
  return sel;
}

Clients make_clients(const Config& config) {
  Clients c;
  if (config.text_gen.kind == "http") {
    c.text_gen = std::make_unique<HttpTextGenClient>(config.text_gen);
  } else {
    c.text_gen = std::make_unique<StubTextGenClient>();
  }
  if (config.speech.kind == "http") {
    c.speech = std::make_unique<HttpSpeechClient>(config.speech);
  } else {
    c.speech = std::make_unique<StubSpeechClient>(config.speech_rate_chars_per_sec);
  }
  if (config.composer.kind == "http") c.composer = std::make_unique<HttpComposerClient>(config.composer);
  return c;
}

}  // namespace choreo
