#pragma once

#include <string>
#include <vector>

namespace faultline::workload {

// The thirteen ground-truth checks the workload runs between API calls.
// Polling checks wait on a lifecycle settle (re-reading until the budget is
// spent); the rest are single reads. Each check belongs to the subsystem
// whose resource it inspects, which is what failure locality is measured
// against.
enum class AssertionId {
    ImageActive,
    KeypairCreated,
    SecurityGroupCreated,
    NetworkActive,
    SubnetCreated,
    RouterActive,
    RouterInterfaceCreated,
    InstanceActive,
    VolumeCreated,
    VolumeAttached,
    FloatingIpCreated,
    FloatingIpAdded,
    SshReachable,
};

struct AssertionDef {
    AssertionId id;
    std::string name;
    std::string subsystem;
    bool polling;
};

const std::vector<AssertionDef>& assertion_defs();
const AssertionDef& assertion_def(AssertionId id);
const AssertionDef* find_assertion(const std::string& name);

}  // namespace faultline::workload
