#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "choreo/studio.hpp"

namespace choreo {

// Local HTTP front end for a Studio. Every route is served under /api/v1/
// and under the unversioned /api/ alias:
//   GET  timeline                 current timeline (one document, all channels)
//   GET  trace?seed=&jitter=      fresh simulation + verification report;
//                                 jitter applies to every channel unless
//                                 jitter_speech/jitter_visual/jitter_gesture
//   GET  scene, GET placement     loaded scene and its solved placement
//   POST nudge {event_id, delta_ms}
//   GET  variants, POST select_variant {label}
// Static files (the studio bundle) are served from `static_dir` at "/".
class StudioServer {
 public:
  StudioServer(Studio& studio, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~StudioServer();
  StudioServer(const StudioServer&) = delete;
  StudioServer& operator=(const StudioServer&) = delete;

  // Binds to an ephemeral port and returns it (-1 on failure).
  int bind_to_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace choreo
