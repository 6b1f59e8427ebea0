#pragma once

#include "faultline/support/jsonio.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace faultline::cloud {

// Error reply from a peer, or a transport failure ("unavailable",
// "timeout") synthesized by the client.
struct RpcError {
    std::string code;
    std::string message;
};

// Loopback JSON-RPC server. One POST /rpc route multiplexes endpoints by
// name; GET /health answers without touching any shared state so readiness
// polling never disturbs an experiment. Handlers run strictly one at a time.
class RpcServer {
public:
    using Handler = std::function<support::cjson(const support::cjson& payload)>;

    RpcServer();
    ~RpcServer();

    void add(const std::string& endpoint, Handler handler);

    // Binds 127.0.0.1 on an ephemeral port and serves on a background
    // thread. Returns the bound port.
    int start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::map<std::string, Handler> handlers_;
    std::mutex serial_;
    std::thread thread_;

    support::cjson dispatch(const support::cjson& request);
};

// Keep-alive client for one peer. Safe to share across threads.
class RpcClient {
public:
    RpcClient(const std::string& host, int port);
    ~RpcClient();

    // Throws RpcError both for error replies and for transport failures.
    support::cjson call(const std::string& endpoint, const support::cjson& payload,
                        int timeout_ms = 10000);

    bool health(int timeout_ms = 1000);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::mutex mutex_;
    std::string host_;
    int port_;
};

}  // namespace faultline::cloud
