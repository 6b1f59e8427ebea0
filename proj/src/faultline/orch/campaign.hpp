#pragma once

#include "faultline/orch/config.hpp"
#include "faultline/orch/experiment.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace faultline::orch {

inline constexpr const char* kToolName = "faultline";
inline constexpr const char* kToolVersion = "0.1.0";

struct CampaignOptions {
    std::filesystem::path out;
    std::filesystem::path svc_binary;
    uint64_t seed = 0;
    int jobs = 1;
    int max_points = 0;            // 0 runs every covered point
    double round_budget_secs = 0;  // 0 takes the config value
    std::vector<std::string> only_points;  // restrict to these ids when non-empty
    // Called after each experiment with completion counts; may be empty.
    std::function<void(const ExperimentOutcome&, int done, int total)> progress;
};

struct CampaignSummary {
    int files_scanned = 0;
    int points = 0;
    int markers = 0;
    int covered = 0;
    int selected = 0;
    int completed = 0;
    int invalid = 0;
};

// Full pipeline into a fresh output directory: scan, coverage gate, then one
// experiment per selected point. The manifest file in the output directory is
// rewritten atomically at every phase boundary.
CampaignSummary run_campaign(const CampaignConfig& cfg, const CampaignOptions& opts);

// Continues an interrupted campaign in place. Refuses to resume when the
// configuration hash recorded in the manifest does not match; experiments
// that already have a record on disk are not rerun. Seed and point selection
// come from the manifest, not from the options.
CampaignSummary resume_campaign(const CampaignConfig& cfg, const CampaignOptions& opts);

}  // namespace faultline::orch
