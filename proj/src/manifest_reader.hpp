#pragma once

// Field-level JSON reading that records problems instead of throwing, so a
// single pass over a manifest reports every malformed field with its
// JSON-pointer key path.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "choreo/asset_model.hpp"

namespace choreo::detail {

class ManifestReader {
 public:
  ManifestReader(std::string file, std::vector<LoadIssue>& issues)
      : file_(std::move(file)), issues_(issues) {}

  const std::string& file() const { return file_; }

  void error(const std::string& code, const std::string& path, const std::string& message) {
    issues_.push_back({LoadIssue::Severity::error, code, file_, path, message});
  }
  void warning(const std::string& code, const std::string& path, const std::string& message) {
    issues_.push_back({LoadIssue::Severity::warning, code, file_, path, message});
  }

  const nlohmann::json* field(const nlohmann::json& obj, const std::string& path,
                              const char* key, bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) error("malformed_field", path + "/" + key, std::string("missing required field '") + key + "'");
      return nullptr;
    }
    return &*it;
  }

  std::string string(const nlohmann::json& obj, const std::string& path, const char* key,
                     bool required = true, bool non_empty = true) {
    const auto* v = field(obj, path, key, required);
    if (v == nullptr) return {};
    if (!v->is_string()) {
      error("malformed_field", path + "/" + key, "expected a string");
      return {};
    }
    auto s = v->get<std::string>();
    if (non_empty && s.empty()) error("malformed_field", path + "/" + key, "must not be empty");
    return s;
  }

  std::optional<std::int64_t> integer(const nlohmann::json& obj, const std::string& path,
                                      const char* key, bool required = true) {
    const auto* v = field(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      error("malformed_field", path + "/" + key, "expected an integer");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  std::optional<double> number(const nlohmann::json& obj, const std::string& path,
                               const char* key, bool required = true) {
    const auto* v = field(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number() || !std::isfinite(v->get<double>())) {
      error("malformed_field", path + "/" + key, "expected a finite number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<geometry::Vec2> point(const nlohmann::json& value, const std::string& path) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
      error("malformed_field", path, "expected [x, y] in meters");
      return std::nullopt;
    }
    geometry::Vec2 p{value[0].get<double>(), value[1].get<double>()};
    if (!geometry::finite(p)) {
      error("malformed_field", path, "coordinates must be finite");
      return std::nullopt;
    }
    return p;
  }

  std::optional<geometry::Vec2> point(const nlohmann::json& obj, const std::string& path,
                                      const char* key) {
    const auto* v = field(obj, path, key);
    if (v == nullptr) return std::nullopt;
    return point(*v, path + "/" + key);
  }

  std::optional<geometry::Pose2> pose(const nlohmann::json& obj, const std::string& path,
                                      const char* key) {
    const auto* v = field(obj, path, key);
    if (v == nullptr) return std::nullopt;
    const std::string sub = path + "/" + key;
    if (!v->is_object()) {
      error("malformed_field", sub, "expected {x, y, heading}");
      return std::nullopt;
    }
    auto x = number(*v, sub, "x");
    auto y = number(*v, sub, "y");
    auto heading = number(*v, sub, "heading");
    if (!x || !y || !heading) return std::nullopt;
    return geometry::Pose2{{*x, *y}, *heading};
  }

  // Relative media path inside the library directory.
  std::string media_ref(const nlohmann::json& obj, const std::string& path, const char* key) {
    auto ref = string(obj, path, key);
    if (ref.empty()) return ref;
    if (ref.front() == '/' || ref.find("..") != std::string::npos || ref.find('\\') != std::string::npos) {
      error("malformed_field", path + "/" + key, "media reference must be a relative path inside the library");
    }
    return ref;
  }

 private:
  std::string file_;
  std::vector<LoadIssue>& issues_;
};

}  // namespace choreo::detail
