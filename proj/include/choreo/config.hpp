#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "choreo/composer.hpp"
#include "choreo/placement.hpp"
#include "choreo/script_pipeline.hpp"
#include "choreo/simulator.hpp"
#include "choreo/timeline.hpp"

namespace choreo {

struct ClientEndpoint {
  std::string kind = "stub";  // "stub" (or "rule" for the composer) or "http"
  std::string endpoint;       // http://host:port/path when kind == "http"
  int timeout_s = 60;

  friend bool operator==(const ClientEndpoint&, const ClientEndpoint&) = default;
};

struct Config {
  ClientEndpoint text_gen;
  int n_variants = 3;
  NarrationTechniques techniques;

  ClientEndpoint speech;
  double speech_rate_chars_per_sec = 5.0;
  int speech_max_concurrency = 1;

  SegmentationOptions segmentation;

  ClientEndpoint composer{"rule", {}, 60};
  ComposerOptions composer_options;

  AlignConfig alignment;
  PlacementConfig placement;
  SimConfig simulation;
};

// Reads a config document. Missing keys keep their defaults; unknown keys
// and out-of-range values throw Error(invalid_input).
Config config_from_json(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& file);
nlohmann::ordered_json to_json(const Config& config);

}  // namespace choreo
