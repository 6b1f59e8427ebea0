#include "faultline/engine/scan_config.hpp"

#include <stdexcept>

namespace faultline::engine {

ScanConfig ScanConfig::from_json(const support::json& j, const std::filesystem::path& base_dir) {
    ScanConfig cfg;
    std::filesystem::path root = j.at("target_root").get<std::string>();
    cfg.target_root = root.is_absolute() ? root : base_dir / root;
    for (auto it = j.at("subsystems").begin(); it != j.at("subsystems").end(); ++it) {
        cfg.subsystems[it.key()] = it.value().get<std::string>();
    }
    cfg.keywords = j.at("keywords").get<std::vector<std::string>>();
    if (j.contains("extra_keywords")) {
        for (auto it = j.at("extra_keywords").begin(); it != j.at("extra_keywords").end(); ++it) {
            cfg.extra_keywords[it.key()] = it.value().get<std::vector<std::string>>();
        }
    }
    cfg.exception_types = j.at("exception_types").get<std::vector<std::string>>();
    if (cfg.subsystems.empty()) {
        throw std::runtime_error("scan config: no subsystems configured");
    }
    if (cfg.keywords.empty()) {
        throw std::runtime_error("scan config: no keywords configured");
    }
    if (cfg.exception_types.empty()) {
        throw std::runtime_error("scan config: no exception types configured");
    }
    return cfg;
}

support::json ScanConfig::to_json() const {
    support::json j;
    j["target_root"] = target_root.generic_string();
    support::json subs = support::json::object();
    for (const auto& [name, dir] : subsystems) {
        subs[name] = dir;
    }
    j["subsystems"] = subs;
    j["keywords"] = keywords;
    if (!extra_keywords.empty()) {
        support::json extra = support::json::object();
        for (const auto& [name, words] : extra_keywords) {
            extra[name] = words;
        }
        j["extra_keywords"] = extra;
    }
    j["exception_types"] = exception_types;
    return j;
}

bool ScanConfig::matches_call(const std::string& subsystem, const std::string& callee) const {
    if (callee.rfind("__", 0) == 0) {
        return false;
    }
    for (const auto& keyword : keywords) {
        if (callee.find(keyword) != std::string::npos) {
            return true;
        }
    }
    auto it = extra_keywords.find(subsystem);
    if (it != extra_keywords.end()) {
        for (const auto& keyword : it->second) {
            if (callee.find(keyword) != std::string::npos) {
                return true;
            }
        }
    }
    return false;
}

std::string ScanConfig::subsystem_for(const std::string& rel_path) const {
    for (const auto& [name, dir] : subsystems) {
        if (rel_path.rfind(dir + "/", 0) == 0) {
            return name;
        }
    }
    return "";
}

ScanConfig default_scan_config(const std::filesystem::path& target_root) {
    ScanConfig cfg;
    cfg.target_root = target_root;
    cfg.subsystems = {{"compute", "compute"}, {"volume", "volume"}, {"network", "network"}};
    cfg.keywords = {"ds_",     "rpc_",    "instance", "image",   "volume", "attach",
                    "network", "subnet",  "router",   "port",    "floating", "keypair",
                    "secgroup", "quota",  "pool",     "capacity"};
    cfg.exception_types = {"NotFound", "Conflict", "Invalid", "NoCapacity", "Timeout",
                           "StoreError"};
    return cfg;
}

}  // namespace faultline::engine
