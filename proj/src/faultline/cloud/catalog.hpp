#pragma once

#include <string>
#include <vector>

namespace faultline::cloud {

enum class Severity { Debug, Info, Warning, Error, Critical };

const char* severity_name(Severity sev);
bool parse_severity(const std::string& name, Severity& out);
int severity_rank(Severity sev);

// Stable wire codes carried in error replies. "server-error" marks an
// unplanned escape from a handler; everything else is a deliberate refusal.
inline constexpr const char* kErrNotFound = "not-found";
inline constexpr const char* kErrConflict = "conflict";
inline constexpr const char* kErrBadRequest = "bad-request";
inline constexpr const char* kErrNoCapacity = "no-capacity";
inline constexpr const char* kErrQuota = "quota-exceeded";
inline constexpr const char* kErrServer = "server-error";
inline constexpr const char* kErrUnavailable = "unavailable";
inline constexpr const char* kErrTimeout = "timeout";

// Script-visible exception type for a wire code and back. Unknown inputs map
// to StoreError / server-error so nothing is silently dropped.
std::string script_type_for_error_code(const std::string& code);
std::string error_code_for_script_type(const std::string& type);

struct EndpointDef {
    std::string subsystem;
    std::string endpoint;
};

// Public API surface of the cloud, used for dispatch checks and for tagging
// trace events with the owning subsystem.
const std::vector<EndpointDef>& api_endpoints();
bool endpoint_exists(const std::string& subsystem, const std::string& endpoint);

const std::vector<std::string>& service_subsystems();  // compute, volume, network

}  // namespace faultline::cloud
