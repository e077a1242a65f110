#pragma once

#include "mars/flatland/scene.hpp"

#include <json.hpp>

#include <filesystem>

namespace mars {

/// Builds a flatland scene from JSON (format in docs/scene_format.md). Throws
/// SchemaError for malformed input and ValidationError for an invalid scene.
flatland::Scene parse_scene(const nlohmann::json &doc, const std::string &fallback_name = {});

flatland::Scene load_scene(const std::filesystem::path &path);

} // namespace mars
