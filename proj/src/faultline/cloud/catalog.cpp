#include "faultline/cloud/catalog.hpp"

#include <stdexcept>

namespace faultline::cloud {

const char* severity_name(Severity sev) {
    switch (sev) {
        case Severity::Debug:
            return "DEBUG";
        case Severity::Info:
            return "INFO";
        case Severity::Warning:
            return "WARNING";
        case Severity::Error:
            return "ERROR";
        case Severity::Critical:
            return "CRITICAL";
    }
    throw std::logic_error("severity_name: bad value");
}

bool parse_severity(const std::string& name, Severity& out) {
    if (name == "DEBUG") {
        out = Severity::Debug;
    } else if (name == "INFO") {
        out = Severity::Info;
    } else if (name == "WARNING") {
        out = Severity::Warning;
    } else if (name == "ERROR") {
        out = Severity::Error;
    } else if (name == "CRITICAL") {
        out = Severity::Critical;
    } else {
        return false;
    }
    return true;
}

int severity_rank(Severity sev) {
    return static_cast<int>(sev);
}

std::string script_type_for_error_code(const std::string& code) {
    if (code == kErrNotFound) {
        return "NotFound";
    }
    if (code == kErrConflict) {
        return "Conflict";
    }
    if (code == kErrBadRequest) {
        return "Invalid";
    }
    if (code == kErrNoCapacity || code == kErrQuota) {
        return "NoCapacity";
    }
    if (code == kErrTimeout) {
        return "Timeout";
    }
    return "StoreError";
}

std::string error_code_for_script_type(const std::string& type) {
    if (type == "NotFound") {
        return kErrNotFound;
    }
    if (type == "Conflict") {
        return kErrConflict;
    }
    if (type == "Invalid") {
        return kErrBadRequest;
    }
    if (type == "NoCapacity") {
        return kErrNoCapacity;
    }
    if (type == "Timeout") {
        return kErrTimeout;
    }
    return kErrServer;
}

const std::vector<EndpointDef>& api_endpoints() {
    static const std::vector<EndpointDef> defs = {
        {"compute", "register_image"},
        {"compute", "create_keypair"},
        {"compute", "create_security_group"},
        {"compute", "boot_instance"},
        {"compute", "record_association"},
        {"volume", "create_volume"},
        {"volume", "attach_volume"},
        {"network", "create_network"},
        {"network", "create_subnet"},
        {"network", "create_router"},
        {"network", "add_router_interface"},
        {"network", "allocate_port"},
        {"network", "create_floating_ip"},
        {"network", "associate_floating_ip"},
        {"network", "probe_connectivity"},
    };
    return defs;
}

bool endpoint_exists(const std::string& subsystem, const std::string& endpoint) {
    for (const auto& def : api_endpoints()) {
        if (def.subsystem == subsystem && def.endpoint == endpoint) {
            return true;
        }
    }
    return false;
}

const std::vector<std::string>& service_subsystems() {
    static const std::vector<std::string> names = {"compute", "volume", "network"};
    return names;
}

}  // namespace faultline::cloud
