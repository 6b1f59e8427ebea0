#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace faultline::support {

std::string read_file(const std::filesystem::path& path);

// Atomic: writes to a sibling temp file, then renames over the target.
void write_file(const std::filesystem::path& path, const std::string& content);

void append_file(const std::filesystem::path& path, const std::string& content);

void ensure_dir(const std::filesystem::path& dir);
void remove_all(const std::filesystem::path& path);

// Recursive copy; destination directories are created as needed.
void copy_tree(const std::filesystem::path& from, const std::filesystem::path& to);

// Regular files under root, as lexicographically sorted relative paths.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& root,
                                              const std::string& extension = "");

}  // namespace faultline::support
