#pragma once

#include "faultline/cloud/datastore.hpp"
#include "faultline/cloud/log_sink.hpp"
#include "faultline/cloud/rpc.hpp"
#include "faultline/lang/interp.hpp"
#include "faultline/support/jsonio.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>

namespace faultline::cloud {

// How a service reaches the datastore. Deployed services go over HTTP; unit
// tests wire the store in directly. Implementations throw RpcError.
class StoreClient {
public:
    virtual ~StoreClient() = default;
    virtual support::cjson op(const std::string& endpoint, const support::cjson& payload,
                              int timeout_ms = 10000) = 0;
};

// How a service calls another service. Implementations throw RpcError.
class PeerBus {
public:
    virtual ~PeerBus() = default;
    virtual support::cjson call(const std::string& subsystem, const std::string& endpoint,
                                const support::cjson& payload, int timeout_ms = 10000) = 0;
};

// Uniform dispatch of store operations by name, shared by the in-process
// client and the datastore's RPC surface. Converts OpError to RpcError.
support::cjson store_dispatch(Datastore& store, const std::string& endpoint,
                              const support::cjson& payload);
void bind_store_endpoints(RpcServer& server, Datastore& store);

class HttpStoreClient : public StoreClient {
public:
    HttpStoreClient(const std::string& host, int port) : client_(host, port) {}
    support::cjson op(const std::string& endpoint, const support::cjson& payload,
                      int timeout_ms) override {
        return client_.call(endpoint, payload, timeout_ms);
    }

private:
    RpcClient client_;
};

// Resolves peer services through the store's port registry and keeps one
// connection per subsystem.
class HttpPeerBus : public PeerBus {
public:
    explicit HttpPeerBus(StoreClient& store) : store_(store) {}
    support::cjson call(const std::string& subsystem, const std::string& endpoint,
                        const support::cjson& payload, int timeout_ms) override;

private:
    StoreClient& store_;
    std::map<std::string, std::unique_ptr<RpcClient>> clients_;
    std::mutex mutex_;
};

struct ServiceEnv {
    std::string subsystem;
    std::filesystem::path script_dir;
    std::filesystem::path log_file;
    std::filesystem::path trigger_control;  // may not exist; empty means none
    std::filesystem::path trigger_out;
    std::filesystem::path coverage_out;
};

// One scripted service: loads the subsystem's scripts, exposes their api_*
// functions as endpoints, and provides the host functions the scripts run
// against (store access, peer calls, logging, process-local cache, and the
// planted-fault hooks).
//
// Error shape: a script calling fail(code, message) produces a deliberate
// error reply and a WARNING log line; any other script error escaping the
// handler produces a "server-error" reply and an ERROR log line.
class ServiceCore {
public:
    ServiceCore(ServiceEnv env, StoreClient& store, PeerBus& peers);

    support::cjson handle(const std::string& endpoint, const support::cjson& payload);

    const std::string& subsystem() const { return env_.subsystem; }

private:
    ServiceEnv env_;
    StoreClient& store_;
    PeerBus& peers_;
    lang::Module module_;
    std::unique_ptr<lang::Interpreter> interp_;
    std::unique_ptr<LogSink> log_;
    std::map<std::string, lang::Value> cache_;

    int64_t stamp();
    void register_host_builtins();
};

}  // namespace faultline::cloud
