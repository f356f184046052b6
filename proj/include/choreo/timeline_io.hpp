#pragma once

#include <array>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "choreo/timeline.hpp"

namespace choreo {

inline constexpr std::array<const char*, 3> kTimelineFiles = {"narration.json", "visuals.json", "gestures.json"};

// Writes the three timeline documents into out_dir (created if needed) and
// returns their paths. Output bytes depend only on the timeline. Throws
// Error(precondition) for an empty timeline, Error(io) if a file cannot be
// written.
std::array<std::filesystem::path, 3> emit(const Timeline& timeline, const std::filesystem::path& out_dir);

// Reads the three documents back. Throws Error(io) or Error(invalid_input).
Timeline load_timeline(const std::filesystem::path& dir);

// Pretty-printed with a trailing newline; atomically replaces the target.
void write_json_file(const std::filesystem::path& file, const nlohmann::ordered_json& doc);
nlohmann::ordered_json read_json_file(const std::filesystem::path& file);

}  // namespace choreo
