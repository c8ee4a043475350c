#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rpd/design_space.hpp"
#include "rpd/engine.hpp"
#include "rpd/objectives.hpp"

namespace rpd {

/// Everything a config file declares.
struct Problem {
    DesignSpace space;
    std::vector<ObjectiveSpec> objectives;
    std::vector<ConstraintSpec> constraints;
    EngineConfig engine;

    // Objective names followed by constraint names, without repeats.
    std::vector<std::string> required_metrics() const;
};

Problem parse_problem(std::string_view config_text);
Problem load_problem(const std::filesystem::path& path);

}  // namespace rpd
