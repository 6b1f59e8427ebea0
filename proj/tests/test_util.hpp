#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace testutil {

inline std::filesystem::path source_dir() {
    return std::filesystem::path(FAULTLINE_SOURCE_DIR);
}

inline std::filesystem::path fixture_path(const std::string& name) {
    return source_dir() / "tests" / "fixtures" / name;
}

// Scratch directory unique to the current test binary run.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::path(FAULTLINE_BINARY_DIR) / "test-scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Materializes an in-memory tree (rel_path, source) on disk.
inline void write_tree(const std::filesystem::path& root,
                       const std::vector<std::pair<std::string, std::string>>& files) {
    for (const auto& [rel, source] : files) {
        const auto path = root / rel;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::trunc | std::ios::binary);
        out << source;
    }
}

inline std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace testutil
