#pragma once

#include "faultline/engine/points.hpp"
#include "faultline/engine/scanner.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace faultline::engine {

// Injection failure with a stable machine-readable reason code. Codes:
//   file-not-found        point references a file missing from the tree
//   site-not-found        no call/try statement at the recorded span
//   site-mismatch         span exists but callee/role/operand disagree
//   call-value-consumed   a missing-call fault cannot drop a value that
//                         feeds an enclosing expression
//   no-default            dropped-argument fault on a parameter that has
//                         no declared default
//   mutant-parse-failure  the rewritten source no longer parses
class InjectError : public std::runtime_error {
public:
    InjectError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// A deployable one-fault variant of the target tree. Exactly one file
// differs from the input tree; the change is a single statement wrapped in
//   if __trig("<point id>") { <faulty statement> } else { <original> }
// so the fault is inert until the trigger is enabled, and every execution of
// the faulty branch is observable through the trigger channel.
struct Mutant {
    InjectionPoint point;
    std::string exception_type;  // MISSING_EXC_HANDLER only
    std::string mutated_rel_path;
    std::string original_source;
    std::string mutated_source;
    std::vector<std::pair<std::string, std::string>> files;  // full tree
};

Mutant make_mutant(const TargetTree& tree, const InjectionPoint& point, const ScanConfig& cfg);

// Deterministic pick from the configured pool, keyed by point id.
std::string choose_exception_type(const std::string& point_id,
                                  const std::vector<std::string>& types);

// Trigger control channel: one small file per experiment, rewritten whole.
// The guard reads it on every evaluation, so flips take effect immediately
// without touching the service processes.
namespace trigger_file {
void write(const std::filesystem::path& path, const std::string& point_id, bool enabled);
bool enabled_for(const std::filesystem::path& path, const std::string& point_id);
}  // namespace trigger_file

}  // namespace faultline::engine
