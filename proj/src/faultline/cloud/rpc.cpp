#include "faultline/cloud/rpc.hpp"

#include <httplib.h>

#include <chrono>
#include <stdexcept>

namespace faultline::cloud {

using support::cjson;

struct RpcServer::Impl {
    httplib::Server server;
    int port = 0;
};

RpcServer::RpcServer() : impl_(new Impl()) {
    // Nagle's algorithm pairs badly with delayed ACKs on loopback: each small
    // request/response pair would stall for the ~40ms ACK timer. These are
    // tiny latency-bound JSON messages, so flush segments immediately.
    impl_->server.set_tcp_nodelay(true);
    impl_->server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });
    impl_->server.Post("/rpc", [this](const httplib::Request& req, httplib::Response& res) {
        cjson reply;
        try {
            reply = dispatch(cjson::parse(req.body));
        } catch (const cjson::parse_error& err) {
            reply = cjson{{"ok", false},
                          {"error", {{"code", "bad-request"}, {"message", err.what()}}}};
        }
        res.set_content(reply.dump(), "application/json");
    });
}

RpcServer::~RpcServer() {
    stop();
}

void RpcServer::add(const std::string& endpoint, Handler handler) {
    handlers_[endpoint] = std::move(handler);
}

support::cjson RpcServer::dispatch(const cjson& request) {
    const std::string endpoint = request.value("endpoint", "");
    const auto it = handlers_.find(endpoint);
    if (it == handlers_.end()) {
        return cjson{{"ok", false},
                     {"error",
                      {{"code", "bad-request"}, {"message", "unknown endpoint " + endpoint}}}};
    }
    const cjson payload = request.contains("payload") ? request.at("payload") : cjson::object();
    std::lock_guard<std::mutex> lock(serial_);
    try {
        return cjson{{"ok", true}, {"result", it->second(payload)}};
    } catch (const RpcError& err) {
        return cjson{{"ok", false},
                     {"error", {{"code", err.code}, {"message", err.message}}}};
    } catch (const std::exception& err) {
        return cjson{{"ok", false},
                     {"error", {{"code", "server-error"}, {"message", err.what()}}}};
    }
}

int RpcServer::start() {
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0) {
        throw std::runtime_error("rpc server failed to bind");
    }
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    while (!impl_->server.is_running()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    return impl_->port;
}

void RpcServer::stop() {
    if (thread_.joinable()) {
        impl_->server.stop();
        thread_.join();
    }
}

struct RpcClient::Impl {
    httplib::Client client;
    Impl(const std::string& host, int port) : client(host, port) {
        client.set_keep_alive(true);
        client.set_connection_timeout(5, 0);
        client.set_tcp_nodelay(true);
    }
};

RpcClient::RpcClient(const std::string& host, int port)
    : impl_(new Impl(host, port)), host_(host), port_(port) {}

RpcClient::~RpcClient() = default;

support::cjson RpcClient::call(const std::string& endpoint, const cjson& payload,
                               int timeout_ms) {
    const cjson request{{"endpoint", endpoint}, {"payload", payload}};
    std::lock_guard<std::mutex> lock(mutex_);
    impl_->client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    auto res = impl_->client.Post("/rpc", request.dump(), "application/json");
    if (!res) {
        if (res.error() == httplib::Error::Read || res.error() == httplib::Error::Write) {
            throw RpcError{"timeout", endpoint + " timed out after " +
                                          std::to_string(timeout_ms) + "ms"};
        }
        throw RpcError{"unavailable", host_ + ":" + std::to_string(port_) + " unreachable"};
    }
    const cjson reply = cjson::parse(res->body);
    if (!reply.value("ok", false)) {
        const cjson err = reply.value("error", cjson::object());
        throw RpcError{err.value("code", "server-error"), err.value("message", "")};
    }
    return reply.value("result", cjson());
}

bool RpcClient::health(int timeout_ms) {
    std::lock_guard<std::mutex> lock(mutex_);
    impl_->client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    auto res = impl_->client.Get("/health");
    return res && res->status == 200;
}

}  // namespace faultline::cloud
