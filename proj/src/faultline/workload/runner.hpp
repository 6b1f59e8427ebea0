#pragma once

#include "faultline/cloud/service_core.hpp"
#include "faultline/workload/assertions.hpp"
#include "faultline/workload/trace.hpp"

#include <cstdint>
#include <string>

namespace faultline::workload {

struct WorkloadOptions {
    // Suffix appended to every resource name so repeated rounds in the same
    // deployment never collide on ids.
    std::string round_tag = "r1";
    int64_t poll_interval_ms = 100;
    // Logical time a polling assertion may wait for a resource to settle.
    int64_t assert_budget_ms = 10000;
    int rpc_timeout_ms = 10000;
    // The connectivity probe gets a tighter wall-clock deadline: if the
    // network service hangs, the round still ends promptly.
    int probe_timeout_ms = 2000;
};

struct WorkloadResult {
    EventTrace trace;
    bool aborted = false;
    int failed_assertions = 0;
};

// Drives the seven-step provisioning sequence against the cloud API and
// checks ground truth in the datastore after each step. A failed API call
// aborts the remaining steps (client code cannot proceed without the
// resource); a failed assertion is recorded and the run continues.
WorkloadResult run_workload(cloud::PeerBus& api, cloud::StoreClient& store,
                            const WorkloadOptions& opts);

// Resource names used by a round, derived from the tag. Exposed so tests and
// the analyzer can reference the same ids.
std::string resource_name(const std::string& prefix, const std::string& round_tag);

}  // namespace faultline::workload
