#pragma once

#include "faultline/engine/points.hpp"
#include "faultline/orch/experiment.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace faultline::orch {

struct CoverageResult {
    std::vector<std::string> covered;  // sorted point ids reached by the workload
    int markers = 0;                   // probes planted in the instrumented tree
};

// Source files of the pristine target, in tree order.
std::vector<std::pair<std::string, std::string>> tree_sources(const engine::TargetTree& tree);

// Two gate runs before any experiment: the pristine target must pass the
// workload cleanly (otherwise every experiment would be noise), then an
// instrumented copy replays it to learn which injection points the workload
// actually reaches. Throws CampaignError when the gate fails.
CoverageResult run_coverage(const ExperimentContext& ctx,
                            const std::vector<engine::InjectionPoint>& points,
                            const std::filesystem::path& work_dir);

}  // namespace faultline::orch
