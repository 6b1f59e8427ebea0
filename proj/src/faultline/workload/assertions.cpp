#include "faultline/workload/assertions.hpp"

#include <stdexcept>

namespace faultline::workload {

const std::vector<AssertionDef>& assertion_defs() {
    static const std::vector<AssertionDef> defs = {
        {AssertionId::ImageActive, "IMAGE_ACTIVE", "compute", true},
        {AssertionId::KeypairCreated, "KEYPAIR_CREATED", "compute", false},
        {AssertionId::SecurityGroupCreated, "SECURITY_GROUP_CREATED", "compute", false},
        {AssertionId::NetworkActive, "NETWORK_ACTIVE", "network", true},
        {AssertionId::SubnetCreated, "SUBNET_CREATED", "network", false},
        {AssertionId::RouterActive, "ROUTER_ACTIVE", "network", true},
        {AssertionId::RouterInterfaceCreated, "ROUTER_INTERFACE_CREATED", "network", false},
        {AssertionId::InstanceActive, "INSTANCE_ACTIVE", "compute", true},
        {AssertionId::VolumeCreated, "VOLUME_CREATED", "volume", true},
        {AssertionId::VolumeAttached, "VOLUME_ATTACHED", "volume", true},
        {AssertionId::FloatingIpCreated, "FLOATING_IP_CREATED", "network", false},
        {AssertionId::FloatingIpAdded, "FLOATING_IP_ADDED", "network", true},
        {AssertionId::SshReachable, "SSH_REACHABLE", "network", false},
    };
    return defs;
}

const AssertionDef& assertion_def(AssertionId id) {
    for (const auto& def : assertion_defs()) {
        if (def.id == id) return def;
    }
    throw std::logic_error("unknown assertion id");
}

const AssertionDef* find_assertion(const std::string& name) {
    for (const auto& def : assertion_defs()) {
        if (def.name == name) return &def;
    }
    return nullptr;
}

}  // namespace faultline::workload
