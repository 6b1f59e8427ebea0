#pragma once

#include "faultline/cloud/catalog.hpp"
#include "faultline/workload/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace faultline::analyze {

struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LogEntry {
    int64_t t_ms = 0;
    cloud::Severity sev = cloud::Severity::Info;
    std::string component;
    std::string message;
    std::string round;  // setup | faulty | fault_free | post
};

// One experiment as the analyzer sees it. Synthetic records for tests are
// built by filling the fields directly.
struct ExperimentRecord {
    std::string point_id;
    std::string subsystem;  // where the bug was injected
    std::string bug_type;
    workload::EventTrace faulty;
    workload::EventTrace fault_free;
    std::vector<LogEntry> logs;
    std::vector<double> trigger_secs;  // trigger executions, chronological
    int64_t enabled_ms = 0;
    int64_t disabled_ms = 0;
    int64_t end_ms = 0;
    bool sentinel_seen = false;
    bool fresh_store = false;

    static ExperimentRecord load(const std::filesystem::path& exp_dir);
};

struct Dataset {
    std::vector<ExperimentRecord> completed;  // sorted by point id
    std::vector<std::pair<std::string, std::string>> invalid;   // point id, reason
    std::vector<std::pair<std::string, std::string>> excluded;  // point id, load problem

    // Reads every exp-*/record under the campaign output directory. A record
    // that cannot be read lands in `excluded` so the loss is visible instead
    // of silent. Throws AnalysisError when the directory holds no experiments
    // at all.
    static Dataset load(const std::filesystem::path& out_dir);
};

}  // namespace faultline::analyze
