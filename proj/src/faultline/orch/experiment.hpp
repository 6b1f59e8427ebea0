#pragma once

#include "faultline/engine/scanner.hpp"
#include "faultline/orch/config.hpp"
#include "faultline/orch/sandbox.hpp"

#include <filesystem>
#include <string>

namespace faultline::orch {

// Everything an experiment needs that is shared across the campaign.
struct ExperimentContext {
    const CampaignConfig& cfg;
    const engine::TargetTree& tree;
    std::filesystem::path svc_binary;
    double round_budget_secs = 120.0;
};

struct ExperimentOutcome {
    std::string point_id;
    std::string status;          // COMPLETED | INVALID
    std::string invalid_reason;  // set when INVALID
};

// Runs the two-round protocol for one injection point inside exp_dir:
// deploy the mutant with the trigger disarmed, arm it, run the faulty round,
// plant a continuity sentinel, disarm, run the fault-free round, then collect
// traces, logs and trigger executions into exp_dir. Writes exp_dir/record
// in every case, including the INVALID ones.
ExperimentOutcome run_experiment(const ExperimentContext& ctx,
                                 const engine::InjectionPoint& point,
                                 const std::filesystem::path& exp_dir);

}  // namespace faultline::orch
