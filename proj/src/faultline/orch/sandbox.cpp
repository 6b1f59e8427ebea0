#include "faultline/orch/sandbox.hpp"

#include "faultline/cloud/catalog.hpp"
#include "faultline/cloud/rpc.hpp"
#include "faultline/support/fs.hpp"

#include <chrono>
#include <thread>

namespace faultline::orch {

namespace {

std::string output_tail(const std::filesystem::path& file, size_t max_bytes = 400) {
    std::string text;
    try {
        text = support::read_file(file);
    } catch (const std::exception&) {
        return "";
    }
    if (text.size() > max_bytes) text = text.substr(text.size() - max_bytes);
    for (auto& c : text) {
        if (c == '\n') c = ' ';
    }
    return text;
}

}  // namespace

Deployment::Deployment(Options opts) : opts_(std::move(opts)) {
    const auto& root = opts_.root;
    support::ensure_dir(root);
    support::ensure_dir(root / "proc");
    for (const auto& [rel, source] : opts_.files) {
        auto path = root / "scripts" / rel;
        support::ensure_dir(path.parent_path());
        support::write_file(path, source);
    }

    std::vector<std::string> store_argv = {opts_.svc_binary.string(), "store",
                                           "--root", root.string()};
    if (!opts_.seed_file.empty()) {
        store_argv.push_back("--seed");
        store_argv.push_back(opts_.seed_file.string());
    }
    procs_.emplace_back("store", support::ChildProcess::spawn(store_argv, {},
                                                              root / "proc" / "store.out"));
    int store_port = await_port("store", procs_.back().second);
    ports_["store"] = store_port;

    for (const auto& subsystem : cloud::service_subsystems()) {
        std::vector<std::string> argv = {opts_.svc_binary.string(),
                                         "service",
                                         "--subsystem",
                                         subsystem,
                                         "--root",
                                         root.string(),
                                         "--scripts",
                                         (root / "scripts").string(),
                                         "--store-port",
                                         std::to_string(store_port)};
        if (!opts_.trigger_control.empty()) {
            argv.push_back("--control");
            argv.push_back(opts_.trigger_control.string());
        }
        procs_.emplace_back(subsystem,
                            support::ChildProcess::spawn(argv, {},
                                                         root / "proc" / (subsystem + ".out")));
        ports_[subsystem] = await_port(subsystem, procs_.back().second);
    }

    store_ = std::make_unique<cloud::HttpStoreClient>("127.0.0.1", store_port);
    bus_ = std::make_unique<cloud::HttpPeerBus>(*store_);
}

Deployment::~Deployment() {
    stop();
}

int Deployment::await_port(const std::string& name, support::ChildProcess& proc) {
    auto port_file = opts_.root / "ports" / (name + ".port");
    auto out_file = opts_.root / "proc" / (name + ".out");
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(static_cast<long>(opts_.ready_timeout_secs * 1000));
    for (;;) {
        if (std::filesystem::exists(port_file)) {
            int port = 0;
            try {
                port = std::stoi(support::read_file(port_file));
            } catch (const std::exception&) {
                port = 0;
            }
            if (port > 0) {
                cloud::RpcClient probe("127.0.0.1", port);
                while (!probe.health(500)) {
                    if (std::chrono::steady_clock::now() > deadline) {
                        throw DeployError(name + " bound a port but never became healthy");
                    }
                    std::this_thread::sleep_for(std::chrono::milliseconds(5));
                }
                return port;
            }
        }
        if (!proc.running()) {
            throw DeployError(name + " exited during startup: " + output_tail(out_file));
        }
        if (std::chrono::steady_clock::now() > deadline) {
            throw DeployError(name + " did not become ready within " +
                              std::to_string(opts_.ready_timeout_secs) + "s");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
}

support::json Deployment::processes() const {
    support::json out = support::json::object();
    for (const auto& [name, proc] : procs_) {
        out[name] = {{"pid", proc.pid()}, {"port", ports_.at(name)}};
    }
    return out;
}

void Deployment::stop() {
    for (auto it = procs_.rbegin(); it != procs_.rend(); ++it) {
        if (it->second.valid()) it->second.stop(0.5);
    }
}

}  // namespace faultline::orch
