#pragma once

#include "faultline/cloud/datastore.hpp"
#include "faultline/cloud/service_core.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace faultline::cloud {

// Direct in-process store access, used by tests and by anything that runs
// the cloud without separate processes.
class LocalStoreClient : public StoreClient {
public:
    explicit LocalStoreClient(Datastore& store) : store_(store) {}
    support::cjson op(const std::string& endpoint, const support::cjson& payload,
                      int timeout_ms) override {
        (void)timeout_ms;
        return store_dispatch(store_, endpoint, payload);
    }

private:
    Datastore& store_;
};

class LocalPeerBus : public PeerBus {
public:
    void attach(const std::string& subsystem, ServiceCore* core) {
        cores_[subsystem] = core;
    }
    support::cjson call(const std::string& subsystem, const std::string& endpoint,
                        const support::cjson& payload, int timeout_ms) override;

private:
    std::map<std::string, ServiceCore*> cores_;
};

// The whole minicloud in one process: the datastore plus the three scripted
// services, wired directly. Behavior matches the deployed four-process form
// except that nothing crosses a socket.
class LocalCloud {
public:
    struct Options {
        std::filesystem::path root;        // run dir: logs/, triggers/, coverage/
        std::filesystem::path target_dir;  // deployed scripts, one subdir per subsystem
        support::cjson seed;
        bool persist_store = false;               // keep tx/snapshot under root/store
        std::filesystem::path trigger_control;    // empty: planted faults stay off
    };

    explicit LocalCloud(Options opts);

    // Public API entry, same surface the HTTP wire exposes. Throws RpcError.
    support::cjson api(const std::string& subsystem, const std::string& endpoint,
                       const support::cjson& payload, int timeout_ms = 10000);

    StoreClient& store_client() { return *store_client_; }
    Datastore& store() { return *store_; }
    PeerBus& bus() { return bus_; }

private:
    Options opts_;
    std::unique_ptr<Datastore> store_;
    std::unique_ptr<LocalStoreClient> store_client_;
    LocalPeerBus bus_;
    std::vector<std::unique_ptr<ServiceCore>> services_;
};

}  // namespace faultline::cloud
