#include "faultline/orch/experiment.hpp"

#include "faultline/cloud/log_sink.hpp"
#include "faultline/cloud/rpc.hpp"
#include "faultline/engine/inject.hpp"
#include "faultline/support/fs.hpp"
#include "faultline/workload/runner.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <thread>

namespace faultline::orch {

namespace {

using support::cjson;
using support::json;

struct RoundOutcome {
    workload::WorkloadResult result;
    bool timed_out = false;
};

// Runs one workload round on its own thread under a wall-clock budget. On
// timeout the deployment is stopped so the worker's next call fails fast and
// the thread can be joined.
RoundOutcome run_round(Deployment& dep, workload::WorkloadOptions opts, double budget_secs) {
    std::packaged_task<workload::WorkloadResult()> task(
        [&dep, opts] { return workload::run_workload(dep.bus(), dep.store(), opts); });
    auto fut = task.get_future();
    std::thread worker(std::move(task));
    if (fut.wait_for(std::chrono::duration<double>(budget_secs)) ==
        std::future_status::ready) {
        worker.join();
        return {fut.get(), false};
    }
    dep.stop();
    worker.join();
    return {workload::WorkloadResult{}, true};
}

int64_t store_now(cloud::StoreClient& store) {
    return store.op("now", cjson::object(), 5000).at("time_ms").get<int64_t>();
}

// Probe for a record without disturbing anything but the clock. Returns
// whether the record exists.
bool record_exists(cloud::StoreClient& store, const std::string& kind, const std::string& id) {
    try {
        store.op("get", cjson{{"kind", kind}, {"id", id}}, 5000);
        return true;
    } catch (const cloud::RpcError&) {
        return false;
    }
}

const char* window_for(int64_t t_ms, int64_t enabled_ms, int64_t disabled_ms, int64_t end_ms) {
    if (t_ms <= enabled_ms) return "setup";
    if (t_ms <= disabled_ms) return "faulty";
    if (t_ms <= end_ms) return "fault_free";
    return "post";
}

json collect_logs(const std::filesystem::path& logs_dir, int64_t enabled_ms,
                  int64_t disabled_ms, int64_t end_ms) {
    json out = json::array();
    std::vector<cloud::LogLine> lines;
    if (std::filesystem::exists(logs_dir)) {
        for (const auto& rel : support::list_files(logs_dir, ".log")) {
            auto parsed = cloud::parse_log_file(logs_dir / rel);
            lines.insert(lines.end(), parsed.begin(), parsed.end());
        }
    }
    std::stable_sort(lines.begin(), lines.end(),
                     [](const cloud::LogLine& a, const cloud::LogLine& b) { return a.t_ms < b.t_ms; });
    for (const auto& line : lines) {
        out.push_back({{"t_ms", line.t_ms},
                       {"severity", cloud::severity_name(line.sev)},
                       {"component", line.component},
                       {"message", line.message},
                       {"round", window_for(line.t_ms, enabled_ms, disabled_ms, end_ms)}});
    }
    return out;
}

json collect_triggers(const std::filesystem::path& triggers_dir) {
    json out = json::array();
    std::vector<json> rows;
    if (std::filesystem::exists(triggers_dir)) {
        for (const auto& rel : support::list_files(triggers_dir, ".jsonl")) {
            for (auto& row : support::load_jsonl_file(triggers_dir / rel)) {
                rows.push_back(std::move(row));
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const json& a, const json& b) {
        return a.at("t_ms").get<int64_t>() < b.at("t_ms").get<int64_t>();
    });
    for (const auto& row : rows) {
        out.push_back(row.at("t_ms").get<int64_t>() / 1000.0);
    }
    return out;
}

json round_summary(const workload::WorkloadResult& r, const std::string& trace_rel) {
    return {{"trace", trace_rel},
            {"aborted", r.aborted},
            {"failed_assertions", r.failed_assertions}};
}

ExperimentOutcome persist(const std::filesystem::path& exp_dir, json record) {
    ExperimentOutcome out;
    out.point_id = record.at("point").at("id").get<std::string>();
    out.status = record.at("status").get<std::string>();
    if (record.contains("invalid_reason")) {
        out.invalid_reason = record.at("invalid_reason").get<std::string>();
    }
    support::save_json_file(exp_dir / "record", record);
    return out;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentContext& ctx,
                                 const engine::InjectionPoint& point,
                                 const std::filesystem::path& exp_dir) {
    support::remove_all(exp_dir);
    support::ensure_dir(exp_dir);

    json record;
    record["point"] = point.to_json();
    record["status"] = "INVALID";

    engine::Mutant mutant;
    try {
        mutant = engine::make_mutant(ctx.tree, point, ctx.cfg.scan);
    } catch (const engine::InjectError& e) {
        record["invalid_reason"] = "inject-rejected:" + e.code();
        return persist(exp_dir, std::move(record));
    }
    record["exception_type"] = mutant.exception_type;
    record["mutated_file"] = mutant.mutated_rel_path;

    auto control = exp_dir / "control";
    engine::trigger_file::write(control, point.id, false);

    auto run_dir = exp_dir / "run";
    Deployment dep;
    try {
        Deployment::Options opts;
        opts.root = run_dir;
        opts.svc_binary = ctx.svc_binary;
        opts.seed_file = ctx.cfg.seed_data;
        opts.files = mutant.files;
        opts.trigger_control = control;
        dep = Deployment(opts);
    } catch (const DeployError& e) {
        record["invalid_reason"] = std::string("deploy-failure: ") + e.what();
        return persist(exp_dir, std::move(record));
    }

    support::ensure_dir(exp_dir / "traces");
    support::ensure_dir(exp_dir / "logs");

    try {
        // Fresh-state probes: a leftover sentinel or poison marker would mean
        // the sandbox leaked state from a previous experiment.
        bool fresh = !record_exists(dep.store(), "sentinel", "exp") &&
                     !record_exists(dep.store(), "poison", "marker");
        record["fresh_store"] = fresh;

        int64_t enabled_ms = store_now(dep.store());
        engine::trigger_file::write(control, point.id, true);

        auto wl = ctx.cfg.workload;
        wl.round_tag = "r1";
        auto faulty = run_round(dep, wl, ctx.round_budget_secs);
        if (faulty.timed_out) {
            record["invalid_reason"] = "round-budget-exceeded: faulty round";
            return persist(exp_dir, std::move(record));
        }

        // Continuity sentinel: written while the faulty round's window is
        // still open, read back after the fault-free round.
        dep.store().op("put",
                       cjson{{"kind", "sentinel"},
                             {"id", "exp"},
                             {"record", cjson{{"written_in", "faulty"}}}},
                       5000);

        engine::trigger_file::write(control, point.id, false);
        int64_t disabled_ms = store_now(dep.store());

        wl.round_tag = "r2";
        auto fault_free = run_round(dep, wl, ctx.round_budget_secs);
        if (fault_free.timed_out) {
            record["invalid_reason"] = "round-budget-exceeded: fault-free round";
            return persist(exp_dir, std::move(record));
        }

        record["sentinel_seen"] = record_exists(dep.store(), "sentinel", "exp");
        int64_t end_ms = store_now(dep.store());

        // Poison the store so any state reuse by a later experiment is
        // detectable through its freshness probe.
        dep.store().op("put",
                       cjson{{"kind", "poison"},
                             {"id", "marker"},
                             {"record", cjson{{"from", point.id}}}},
                       5000);

        faulty.result.trace.save(exp_dir / "traces" / "faulty.jsonl");
        fault_free.result.trace.save(exp_dir / "traces" / "fault_free.jsonl");

        dep.stop();

        if (std::filesystem::exists(run_dir / "logs")) {
            support::copy_tree(run_dir / "logs", exp_dir / "logs");
        }

        record["windows"] = {{"enabled_ms", enabled_ms},
                             {"disabled_ms", disabled_ms},
                             {"end_ms", end_ms}};
        record["rounds"] = {
            {"faulty", round_summary(faulty.result, "traces/faulty.jsonl")},
            {"fault_free", round_summary(fault_free.result, "traces/fault_free.jsonl")}};
        record["trigger_executions"] = collect_triggers(run_dir / "triggers");
        record["logs"] = collect_logs(exp_dir / "logs", enabled_ms, disabled_ms, end_ms);
        record["status"] = "COMPLETED";
    } catch (const cloud::RpcError& e) {
        record["invalid_reason"] = "deploy-failure: mid-experiment rpc loss: " + e.code;
    } catch (const std::exception& e) {
        record["invalid_reason"] = std::string("deploy-failure: ") + e.what();
    }
    return persist(exp_dir, std::move(record));
}

}  // namespace faultline::orch
