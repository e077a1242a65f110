#pragma once

#include "mars/io/problem_io.hpp"

#include <string>
#include <vector>

namespace test {

inline std::string data(const std::string &relative) { return std::string(MARS_DATA_DIR) + "/" + relative; }

inline mars::MisProblem corpus(const std::string &name) { return mars::load_problem(data("corpus/" + name + ".json")); }

inline const std::vector<std::string> &corpus_names() {
    static const std::vector<std::string> names = {"fig2", "perfect", "disjoint", "symmetric", "bimodal", "splitting"};
    return names;
}

inline mars::MisProblem parse(const std::string &text) { return mars::parse_problem(nlohmann::json::parse(text)); }

} // namespace test
