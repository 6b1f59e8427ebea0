// Process entry for one testbed component. Two roles:
//
//   minicloud-svc store   --root DIR [--seed FILE]
//   minicloud-svc service --subsystem NAME --root DIR --scripts DIR
//                         --store-port N [--control FILE]
//
// The store role serves the datastore over loopback RPC. The service role
// runs one scripted subsystem against a remote store and registers its own
// port in the store's scratch registry so peers can find it. Both roles
// write "<root>/ports/<name>.port" once they are reachable, then idle until
// the parent stops them.

#include <CLI11.hpp>

#include "faultline/cloud/catalog.hpp"
#include "faultline/cloud/datastore.hpp"
#include "faultline/cloud/local_cloud.hpp"
#include "faultline/cloud/log_sink.hpp"
#include "faultline/cloud/rpc.hpp"
#include "faultline/cloud/service_core.hpp"
#include "faultline/support/fs.hpp"
#include "faultline/support/jsonio.hpp"

#include <chrono>
#include <iostream>
#include <thread>

using namespace faultline;
using support::cjson;

namespace {

void write_port_file(const std::filesystem::path& root, const std::string& name, int port) {
    support::ensure_dir(root / "ports");
    support::write_file(root / "ports" / (name + ".port"), std::to_string(port) + "\n");
}

[[noreturn]] void park() {
    for (;;) {
        std::this_thread::sleep_for(std::chrono::seconds(1));
    }
}

int run_store(const std::filesystem::path& root, const std::string& seed_file) {
    cjson seed = cjson::object();
    if (!seed_file.empty()) {
        seed = cjson(support::load_json_file(seed_file));
    }
    cloud::Datastore store(root / "store", seed);

    cloud::RpcServer server;
    cloud::bind_store_endpoints(server, store);
    const int port = server.start();

    cloud::LogSink log(root / "logs" / "store.log", "store", [&store] { return store.stamp(); });
    log.write(cloud::Severity::Info, "store started");

    write_port_file(root, "store", port);
    park();
}

int run_service(const std::string& subsystem, const std::filesystem::path& root,
                const std::filesystem::path& scripts, int store_port,
                const std::string& control) {
    {
        cloud::RpcClient probe("127.0.0.1", store_port);
        bool up = false;
        for (int i = 0; i < 100 && !up; ++i) {
            up = probe.health(200);
            if (!up) {
                std::this_thread::sleep_for(std::chrono::milliseconds(50));
            }
        }
        if (!up) {
            std::cerr << subsystem << ": store on port " << store_port
                      << " never became healthy\n";
            return 1;
        }
    }

    cloud::HttpStoreClient store_client("127.0.0.1", store_port);
    cloud::HttpPeerBus bus(store_client);

    cloud::ServiceEnv env;
    env.subsystem = subsystem;
    env.script_dir = scripts / subsystem;
    env.log_file = root / "logs" / (subsystem + ".log");
    env.trigger_control = control;
    env.trigger_out = root / "triggers" / (subsystem + ".jsonl");
    env.coverage_out = root / "coverage" / (subsystem + ".jsonl");

    cloud::ServiceCore core(env, store_client, bus);

    cloud::RpcServer server;
    for (const auto& def : cloud::api_endpoints()) {
        if (def.subsystem != subsystem) {
            continue;
        }
        const std::string name = def.endpoint;
        server.add(name, [&core, name](const cjson& payload) {
            return core.handle(name, payload);
        });
    }
    const int port = server.start();

    store_client.op("put",
                    cjson{{"kind", "__svc"},
                          {"id", subsystem},
                          {"record", cjson{{"host", "127.0.0.1"}, {"port", port}}}},
                    5000);
    write_port_file(root, subsystem, port);
    park();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minicloud component process"};
    app.require_subcommand(1);

    std::string root;
    std::string seed_file;
    auto* store_cmd = app.add_subcommand("store", "serve the datastore");
    store_cmd->add_option("--root", root, "run directory")->required();
    store_cmd->add_option("--seed", seed_file, "initial records (json)");

    std::string subsystem;
    std::string svc_root;
    std::string scripts;
    std::string control;
    int store_port = 0;
    auto* svc_cmd = app.add_subcommand("service", "serve one scripted subsystem");
    svc_cmd->add_option("--subsystem", subsystem, "subsystem name")->required();
    svc_cmd->add_option("--root", svc_root, "run directory")->required();
    svc_cmd->add_option("--scripts", scripts, "deployed script tree")->required();
    svc_cmd->add_option("--store-port", store_port, "datastore RPC port")->required();
    svc_cmd->add_option("--control", control, "trigger control file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (store_cmd->parsed()) {
            return run_store(root, seed_file);
        }
        return run_service(subsystem, svc_root, scripts, store_port, control);
    } catch (const cloud::RpcError& err) {
        std::cerr << "rpc failure: " << err.code << ": " << err.message << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "fatal: " << err.what() << "\n";
        return 1;
    }
}
