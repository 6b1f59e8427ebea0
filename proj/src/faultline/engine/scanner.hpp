#pragma once

#include "faultline/engine/points.hpp"
#include "faultline/engine/scan_config.hpp"
#include "faultline/lang/interp.hpp"
#include "faultline/lang/parser.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace faultline::engine {

// Parsed view of one target tree: every script file of every configured
// subsystem, plus a per-subsystem module for callee signature lookups.
class TargetTree {
public:
    struct Entry {
        std::string subsystem;
        lang::SourceFile file;
    };

    // Throws std::runtime_error naming file and position on any parse error.
    static TargetTree load(const ScanConfig& cfg);
    static TargetTree load_from_sources(
        const std::vector<std::pair<std::string, std::string>>& files,  // rel_path, source
        const ScanConfig& cfg);

    const std::vector<Entry>& entries() const { return entries_; }
    const Entry* find(const std::string& rel_path) const;

    // Signature of a callee as seen from `subsystem`: user functions of that
    // subsystem's module first, then builtins. Returns false if unresolved.
    struct Callee {
        std::vector<lang::BuiltinParam> params;
    };
    bool resolve_callee(const std::string& subsystem, const std::string& name,
                        Callee& out) const;

private:
    std::vector<Entry> entries_;
    std::map<std::string, lang::Module> modules_;  // per subsystem

    void index();
};

struct ScanResult {
    std::vector<InjectionPoint> points;
    int files_scanned = 0;
};

// Enumerates every injection point in deterministic order: file path, then
// site position, then bug type, then operand index.
ScanResult scan_target(const TargetTree& tree, const ScanConfig& cfg);

}  // namespace faultline::engine
