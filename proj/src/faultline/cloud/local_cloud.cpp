#include "faultline/cloud/local_cloud.hpp"

#include "faultline/cloud/catalog.hpp"
#include "faultline/cloud/log_sink.hpp"

#include <optional>

namespace faultline::cloud {

using support::cjson;

support::cjson LocalPeerBus::call(const std::string& subsystem, const std::string& endpoint,
                                  const cjson& payload, int timeout_ms) {
    (void)timeout_ms;
    const auto it = cores_.find(subsystem);
    if (it == cores_.end()) {
        throw RpcError{kErrUnavailable, "no registered service " + subsystem};
    }
    return it->second->handle(endpoint, payload);
}

LocalCloud::LocalCloud(Options opts) : opts_(std::move(opts)) {
    std::optional<std::filesystem::path> store_dir;
    if (opts_.persist_store) {
        store_dir = opts_.root / "store";
    }
    store_ = std::make_unique<Datastore>(store_dir, opts_.seed);
    store_client_ = std::make_unique<LocalStoreClient>(*store_);

    LogSink store_log(opts_.root / "logs" / "store.log", "store",
                      [this] { return store_->stamp(); });
    store_log.write(Severity::Info, "store started");

    for (const std::string& subsystem : service_subsystems()) {
        ServiceEnv env;
        env.subsystem = subsystem;
        env.script_dir = opts_.target_dir / subsystem;
        env.log_file = opts_.root / "logs" / (subsystem + ".log");
        env.trigger_control = opts_.trigger_control;
        env.trigger_out = opts_.root / "triggers" / (subsystem + ".jsonl");
        env.coverage_out = opts_.root / "coverage" / (subsystem + ".jsonl");
        services_.push_back(std::make_unique<ServiceCore>(env, *store_client_, bus_));
        bus_.attach(subsystem, services_.back().get());
    }
}

support::cjson LocalCloud::api(const std::string& subsystem, const std::string& endpoint,
                               const cjson& payload, int timeout_ms) {
    return bus_.call(subsystem, endpoint, payload, timeout_ms);
}

}  // namespace faultline::cloud
