#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "rpd/problem.hpp"

namespace support {

inline std::filesystem::path source_dir() { return RPD_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

inline rpd::Problem pa_problem() { return rpd::load_problem(source_dir() / "configs" / "pa.json"); }
inline rpd::Problem lna_problem() { return rpd::load_problem(source_dir() / "configs" / "lna.json"); }

// Scratch directory under the system temp dir, emptied on creation.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("rpd_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace support
