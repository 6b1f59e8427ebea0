#pragma once

#include "faultline/cloud/service_core.hpp"
#include "faultline/support/jsonio.hpp"
#include "faultline/support/proc.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace faultline::orch {

struct DeployError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One deployed minicloud: the datastore process plus the three scripted
// service processes, rooted in a private run directory. Services start
// strictly one after another so the startup timeline is identical in every
// deployment. The destructor tears the processes down.
class Deployment {
public:
    struct Options {
        std::filesystem::path root;        // run dir: scripts/, logs/, triggers/, ...
        std::filesystem::path svc_binary;  // the minicloud-svc executable
        std::filesystem::path seed_file;   // optional initial records
        std::vector<std::pair<std::string, std::string>> files;  // rel path -> source
        std::filesystem::path trigger_control;  // optional; absent means no fault armed
        double ready_timeout_secs = 30.0;
    };

    Deployment() = default;
    explicit Deployment(Options opts);  // spawns and waits for readiness
    ~Deployment();

    Deployment(const Deployment&) = delete;
    Deployment& operator=(const Deployment&) = delete;
    Deployment(Deployment&&) noexcept = default;
    Deployment& operator=(Deployment&&) noexcept = default;

    bool started() const { return store_ != nullptr; }
    cloud::StoreClient& store() { return *store_; }
    cloud::PeerBus& bus() { return *bus_; }

    // {"store": {"pid": ..., "port": ...}, ...} for the experiment's
    // environment sidecar. Pids and ports are host-assigned, so this is the
    // one artifact that differs between identical runs.
    support::json processes() const;

    void stop();  // idempotent; children are stopped in reverse start order

private:
    Options opts_;
    std::vector<std::pair<std::string, support::ChildProcess>> procs_;
    std::map<std::string, int> ports_;
    std::unique_ptr<cloud::HttpStoreClient> store_;
    std::unique_ptr<cloud::HttpPeerBus> bus_;

    int await_port(const std::string& name, support::ChildProcess& proc);
};

}  // namespace faultline::orch
