#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "choreo/compiler.hpp"
#include "choreo/simulator.hpp"

namespace choreo {

inline constexpr const char* kOverridesFile = "overrides.json";
inline constexpr const char* kOverridesSchemaVersion = "choreo.overrides/1";

struct Nudge {
  std::string event_id;
  std::int64_t delta_ms = 0;

  friend bool operator==(const Nudge&, const Nudge&) = default;
};

struct NudgeOutcome {
  enum class Status { accepted, rejected, not_found, bad_request };
  Status status = Status::accepted;
  Timeline timeline;                // current timeline after the call
  std::vector<Finding> violations;  // why a nudge was rejected
  std::string message;
};

// Preview-and-nudge service state behind the HTTP API. Compiles the tour on
// construction, writes the compiler output to out_dir and layers educator
// nudges from out_dir/overrides.json on top. Reads return a consistent
// snapshot; mutations are serialized.
class Studio {
 public:
  struct Options {
    std::filesystem::path library_dir;
    std::filesystem::path tour_file;
    std::filesystem::path out_dir;
    std::optional<std::filesystem::path> scene_file;
    Config config;
  };

  // Throws Error when the library, tour or scene cannot be loaded or the
  // tour does not compile.
  explicit Studio(Options options);

  Timeline timeline() const;
  std::vector<std::string> variants() const;
  std::string selected_variant() const;
  std::vector<Nudge> nudges() const;
  std::vector<std::string> diagnostics() const;

  ExecutionTrace trace(const SimConfig& sim) const;
  const std::optional<Scene>& scene() const { return scene_; }
  PlacementResult placement() const;  // throws Error(not_found) without a scene

  NudgeOutcome nudge(const std::string& event_id, std::int64_t delta_ms);
  // Returns false for an unknown label.
  bool select_variant(const std::string& label);

 private:
  struct Snapshot {
    Timeline base;      // compiler output
    Timeline timeline;  // base + nudges
    std::vector<std::string> variants;
    std::string selected;
    std::vector<Nudge> nudges;
    std::vector<std::string> diagnostics;
  };

  std::shared_ptr<const Snapshot> snapshot() const;
  std::shared_ptr<Snapshot> build(const std::string& variant, const std::vector<Nudge>& nudges) const;
  void persist(const Snapshot& snap);
  void publish(std::shared_ptr<const Snapshot> snap);

  Options options_;
  AssetLibrary library_;
  TourSpec tour_;
  std::optional<Scene> scene_;
  std::map<std::string, std::vector<Nudge>> saved_nudges_;  // by variant

  mutable std::shared_mutex read_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const Snapshot> current_;
};

}  // namespace choreo
