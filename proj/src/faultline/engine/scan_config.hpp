#pragma once

#include "faultline/support/jsonio.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace faultline::engine {

// What to scan and what counts as an internal API call. A call matches when
// its callee name contains any configured keyword as a substring; names
// beginning with "__" (instrumentation helpers) never match.
struct ScanConfig {
    std::filesystem::path target_root;
    std::map<std::string, std::string> subsystems;      // subsystem -> subdirectory
    std::vector<std::string> keywords;                  // shared across subsystems
    std::map<std::string, std::vector<std::string>> extra_keywords;  // per subsystem
    std::vector<std::string> exception_types;           // pool for handler-removal faults

    static ScanConfig from_json(const support::json& j,
                                const std::filesystem::path& base_dir);
    support::json to_json() const;

    bool matches_call(const std::string& subsystem, const std::string& callee) const;
    std::string subsystem_for(const std::string& rel_path) const;  // empty if outside
};

ScanConfig default_scan_config(const std::filesystem::path& target_root);

}  // namespace faultline::engine
