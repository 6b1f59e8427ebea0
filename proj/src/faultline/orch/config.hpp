#pragma once

#include "faultline/engine/scan_config.hpp"
#include "faultline/support/jsonio.hpp"
#include "faultline/workload/runner.hpp"

#include <filesystem>
#include <string>

namespace faultline::orch {

// Campaign-wide failure: configuration problems, broken baselines, refused
// resumes. The CLI maps it to a nonzero exit.
struct CampaignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CampaignConfig {
    engine::ScanConfig scan;
    std::filesystem::path seed_data;
    workload::WorkloadOptions workload;  // round_tag is set per round at run time
    double round_budget_secs = 120.0;
    support::json raw;

    static CampaignConfig load(const std::filesystem::path& file);

    // Stable content hash of the loaded file; campaigns refuse to resume
    // under a different configuration.
    std::string fingerprint() const;
};

}  // namespace faultline::orch
