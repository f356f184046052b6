#include "choreo/server.hpp"

#include <httplib.h>

#include "choreo/json_codec.hpp"

namespace choreo {

namespace {

using codec::Json;

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2), "application/json");
}

Json error_body(const std::string& code, const std::string& message) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  return j;
}

std::int64_t int_param(const httplib::Request& req, const char* key, std::int64_t fallback) {
  if (!req.has_param(key)) return fallback;
  const auto value = req.get_param_value(key);
  std::size_t used = 0;
  const auto parsed = std::stoll(value, &used);
  if (used != value.size()) throw std::invalid_argument(std::string("bad integer for ") + key);
  return parsed;
}

Json findings_json(const std::vector<Finding>& findings) {
  ValidationReport r;
  r.findings = findings;
  return codec::to_json(r);
}

}  // namespace

struct StudioServer::Impl {
  Studio& studio;
  httplib::Server server;

  explicit Impl(Studio& s) : studio(s) {}

  void route_get(const std::string& name, httplib::Server::Handler handler) {
    server.Get("/api/v1/" + name, handler);
    server.Get("/api/" + name, handler);
  }
  void route_post(const std::string& name, httplib::Server::Handler handler) {
    server.Post("/api/v1/" + name, handler);
    server.Post("/api/" + name, handler);
  }

  void install(const std::optional<std::filesystem::path>& static_dir) {
    route_get("timeline", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, codec::to_json(studio.timeline()));
    });

    route_get("trace", [this](const httplib::Request& req, httplib::Response& res) {
      SimConfig sim;
      try {
        sim.seed = static_cast<std::uint64_t>(int_param(req, "seed", 0));
        const auto jitter = int_param(req, "jitter", 0);
        sim.jitter = {int_param(req, "jitter_speech", jitter), int_param(req, "jitter_visual", jitter),
                      int_param(req, "jitter_gesture", jitter)};
        if (req.has_param("epsilon")) sim.epsilon_ms = std::stod(req.get_param_value("epsilon"));
        if (sim.jitter.speech_ms < 0 || sim.jitter.visual_ms < 0 || sim.jitter.gesture_ms < 0) {
          throw std::invalid_argument("jitter bounds must be non-negative");
        }
        if (!(sim.epsilon_ms >= 0)) throw std::invalid_argument("epsilon must be non-negative");
      } catch (const std::exception& e) {
        reply(res, 400, error_body("bad_request", e.what()));
        return;
      }
      try {
        const auto timeline = studio.timeline();
        const auto trace = simulate(timeline, sim);
        Json body;
        body["trace"] = codec::to_json(trace);
        body["report"] = codec::to_json(verify_trace(trace, timeline, sim.epsilon_ms));
        reply(res, 200, body);
      } catch (const Error& e) {
        reply(res, 400, error_body(std::string(to_string(e.code())), e.what()));
      }
    });

    route_get("scene", [this](const httplib::Request&, httplib::Response& res) {
      if (!studio.scene()) {
        reply(res, 404, error_body("not_found", "no scene loaded"));
        return;
      }
      reply(res, 200, codec::to_json(*studio.scene()));
    });

    route_get("placement", [this](const httplib::Request&, httplib::Response& res) {
      try {
        reply(res, 200, codec::to_json(studio.placement()));
      } catch (const PlacementInfeasible& e) {
        Json body = error_body("infeasible", e.what());
        const auto& c = e.counts();
        body["rejections"] = {{"candidates", c.candidates},
                              {"projector_occluded", c.projector_occluded},
                              {"learner_occluded", c.learner_occluded},
                              {"incidence", c.incidence},
                              {"gimbal", c.gimbal}};
        reply(res, 422, body);
      } catch (const Error& e) {
        reply(res, e.code() == ErrorCode::not_found ? 404 : 400, error_body(std::string(to_string(e.code())), e.what()));
      }
    });

    route_post("nudge", [this](const httplib::Request& req, httplib::Response& res) {
      std::string event_id;
      std::int64_t delta = 0;
      try {
        const auto body = nlohmann::json::parse(req.body);
        event_id = body.at("event_id").get<std::string>();
        const auto& d = body.at("delta_ms");
        if (!d.is_number_integer()) throw std::invalid_argument("delta_ms must be an integer");
        delta = d.get<std::int64_t>();
      } catch (const std::exception& e) {
        reply(res, 400, error_body("bad_request", e.what()));
        return;
      }
      const auto outcome = studio.nudge(event_id, delta);
      switch (outcome.status) {
        case NudgeOutcome::Status::accepted: {
          Json body;
          body["accepted"] = true;
          body["timeline"] = codec::to_json(outcome.timeline);
          reply(res, 200, body);
          return;
        }
        case NudgeOutcome::Status::rejected: {
          Json body = error_body("rejected", outcome.message);
          body["accepted"] = false;
          body["report"] = findings_json(outcome.violations);
          reply(res, 409, body);
          return;
        }
        case NudgeOutcome::Status::not_found:
          reply(res, 404, error_body("not_found", outcome.message));
          return;
        case NudgeOutcome::Status::bad_request:
          reply(res, 400, error_body("bad_request", outcome.message));
          return;
      }
    });

    route_get("variants", [this](const httplib::Request&, httplib::Response& res) {
      Json body;
      body["variants"] = studio.variants();
      body["selected"] = studio.selected_variant();
      reply(res, 200, body);
    });

    route_post("select_variant", [this](const httplib::Request& req, httplib::Response& res) {
      std::string label;
      try {
        label = nlohmann::json::parse(req.body).at("label").get<std::string>();
      } catch (const std::exception& e) {
        reply(res, 400, error_body("bad_request", e.what()));
        return;
      }
      try {
        if (!studio.select_variant(label)) {
          reply(res, 404, error_body("not_found", "unknown variant '" + label + "'"));
          return;
        }
      } catch (const Error& e) {
        reply(res, 500, error_body(std::string(to_string(e.code())), e.what()));
        return;
      }
      Json body;
      body["selected"] = label;
      body["timeline"] = codec::to_json(studio.timeline());
      reply(res, 200, body);
    });

    if (static_dir) server.set_mount_point("/", static_dir->string());
  }
};

StudioServer::StudioServer(Studio& studio, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(studio)) {
  impl_->install(static_dir);
}

StudioServer::~StudioServer() { stop(); }

int StudioServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool StudioServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

bool StudioServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void StudioServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void StudioServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace choreo
