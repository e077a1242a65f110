#pragma once

#include "mars/core/problem.hpp"

#include <json.hpp>

#include <filesystem>

namespace mars {

/// Builds a problem from its JSON description (format in docs/problem_format.md).
/// Throws SchemaError for malformed input and ValidationError for a well-formed
/// but invalid problem.
MisProblem parse_problem(const nlohmann::json &doc, const std::string &fallback_name = {});

MisProblem load_problem(const std::filesystem::path &path);

Density parse_density(const nlohmann::json &spec, Interval domain);

} // namespace mars
