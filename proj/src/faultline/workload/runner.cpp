#include "faultline/workload/runner.hpp"

#include <functional>

namespace faultline::workload {

using cloud::RpcError;
using support::cjson;

std::string resource_name(const std::string& prefix, const std::string& round_tag) {
    return prefix + "-" + round_tag;
}

namespace {

struct Check {
    bool ok = false;
    std::string detail;
};

struct Run {
    cloud::PeerBus& api;
    cloud::StoreClient& store;
    const WorkloadOptions& opts;
    EventTrace trace = {};
    bool aborted = false;
    int failed = 0;
    int step = 0;

    int64_t stamp() {
        return store.op("stamp", cjson::object()).at("t_ms").get<int64_t>();
    }

    cjson get(const std::string& kind, const std::string& id) {
        return store.op("get", cjson{{"kind", kind}, {"id", id}});
    }

    bool call(int at_step, const std::string& subsystem, const std::string& endpoint,
              const cjson& payload, cjson* out = nullptr, int timeout_ms = -1) {
        if (aborted) return false;
        step = at_step;
        ApiEvent ev;
        ev.step = at_step;
        ev.subsystem = subsystem;
        ev.endpoint = endpoint;
        ev.t_req = stamp();
        try {
            cjson result = api.call(subsystem, endpoint, payload,
                                    timeout_ms < 0 ? opts.rpc_timeout_ms : timeout_ms);
            ev.t_res = stamp();
            if (out) *out = std::move(result);
        } catch (const RpcError& err) {
            ev.t_res = stamp();
            ev.ok = false;
            ev.code = err.code;
            aborted = true;
        }
        trace.add_api(ev);
        return ev.ok;
    }

    Check eval(const std::function<Check()>& pred) {
        try {
            return pred();
        } catch (const RpcError& err) {
            return {false, err.code};
        } catch (const cjson::exception&) {
            return {false, "malformed-record"};
        }
    }

    void check(AssertionId id, const std::function<Check()>& pred) {
        if (aborted) return;
        const AssertionDef& def = assertion_def(id);
        int64_t budget = opts.assert_budget_ms;
        int polls = 0;
        Check res;
        for (;;) {
            res = eval(pred);
            ++polls;
            if (res.ok || !def.polling || budget < opts.poll_interval_ms) break;
            store.op("advance", cjson{{"delta_ms", opts.poll_interval_ms}});
            budget -= opts.poll_interval_ms;
        }
        AssertionEvent ev;
        ev.step = step;
        ev.id = def.name;
        ev.subsystem = def.subsystem;
        ev.t = stamp();
        ev.ok = res.ok;
        ev.polls = polls;
        ev.detail = res.ok ? "" : res.detail;
        trace.add_assertion(ev);
        if (!res.ok) ++failed;
    }
};

Check state_is(const cjson& rec, const std::string& want) {
    const std::string got = rec.value("state", "");
    if (got == want) return {true, ""};
    return {false, "state=" + got};
}

}  // namespace

WorkloadResult run_workload(cloud::PeerBus& api, cloud::StoreClient& store,
                            const WorkloadOptions& opts) {
    Run run{api, store, opts};

    const std::string img = resource_name("img", opts.round_tag);
    const std::string key = resource_name("key", opts.round_tag);
    const std::string secgrp = resource_name("secgrp", opts.round_tag);
    const std::string net = resource_name("net", opts.round_tag);
    const std::string subnet = resource_name("subnet", opts.round_tag);
    const std::string router = resource_name("router", opts.round_tag);
    const std::string inst = resource_name("inst", opts.round_tag);
    const std::string vol = resource_name("vol", opts.round_tag);
    const std::string fip = resource_name("fip", opts.round_tag);
    const std::string prefix = "10.31.0.";

    // Step 1: base image.
    run.call(1, "compute", "register_image", cjson{{"name", img}, {"size_mb", 512}});
    run.check(AssertionId::ImageActive,
              [&] { return state_is(run.get("image", img), "ACTIVE"); });

    // Step 2: credentials.
    run.call(2, "compute", "create_keypair", cjson{{"name", key}});
    run.check(AssertionId::KeypairCreated, [&]() -> Check {
        const cjson rec = run.get("keypair", key);
        if (rec.value("fingerprint", "").empty()) return {false, "no-fingerprint"};
        return {true, ""};
    });
    run.call(2, "compute", "create_security_group", cjson{{"name", secgrp}});
    run.check(AssertionId::SecurityGroupCreated, [&]() -> Check {
        const cjson rec = run.get("secgroup", secgrp);
        for (const auto& rule : rec.value("rules", cjson::array())) {
            if (rule == "allow-ssh") return {true, ""};
        }
        return {false, "no-ssh-rule"};
    });

    // Step 3: network fabric.
    run.call(3, "network", "create_network", cjson{{"name", net}});
    run.check(AssertionId::NetworkActive,
              [&] { return state_is(run.get("network", net), "ACTIVE"); });
    run.call(3, "network", "create_subnet",
             cjson{{"name", subnet}, {"network", net}, {"prefix", prefix}});
    run.check(AssertionId::SubnetCreated, [&]() -> Check {
        const cjson rec = run.get("subnet", subnet);
        if (rec.value("network", "") != net) return {false, "wrong-network"};
        if (rec.value("gateway", "").empty()) return {false, "no-gateway"};
        return {true, ""};
    });

    // Step 4: routing.
    run.call(4, "network", "create_router", cjson{{"name", router}});
    run.check(AssertionId::RouterActive,
              [&] { return state_is(run.get("router", router), "ACTIVE"); });
    run.call(4, "network", "add_router_interface",
             cjson{{"router", router}, {"subnet", subnet}});
    run.check(AssertionId::RouterInterfaceCreated, [&]() -> Check {
        const cjson rec = run.get("router_iface", router + ":" + subnet);
        if (rec.value("address", "").empty()) return {false, "no-address"};
        return {true, ""};
    });

    // Step 5: instance.
    run.call(5, "compute", "boot_instance",
             cjson{{"name", inst},
                   {"image", img},
                   {"flavor", "standard"},
                   {"keypair", key},
                   {"secgroup", secgrp},
                   {"network", net}});
    run.check(AssertionId::InstanceActive,
              [&] { return state_is(run.get("instance", inst), "ACTIVE"); });

    // Step 6: block storage.
    run.call(6, "volume", "create_volume", cjson{{"name", vol}, {"size_gb", 10}});
    run.check(AssertionId::VolumeCreated,
              [&] { return state_is(run.get("volume", vol), "AVAILABLE"); });
    run.call(6, "volume", "attach_volume", cjson{{"volume", vol}, {"instance", inst}});
    run.check(AssertionId::VolumeAttached, [&]() -> Check {
        const cjson rec = run.get("volume", vol);
        Check st = state_is(rec, "IN_USE");
        if (!st.ok) return st;
        if (rec.value("attached_to", "") != inst) return {false, "wrong-instance"};
        return {true, ""};
    });

    // Step 7: external reachability.
    run.call(7, "network", "create_floating_ip", cjson{{"name", fip}});
    run.check(AssertionId::FloatingIpCreated, [&]() -> Check {
        const cjson rec = run.get("fip", fip);
        if (rec.value("address", "").empty()) return {false, "no-address"};
        return {true, ""};
    });
    run.call(7, "network", "associate_floating_ip",
             cjson{{"fip", fip}, {"instance", inst}});
    run.check(AssertionId::FloatingIpAdded, [&]() -> Check {
        const cjson rec = run.get("fip", fip);
        Check st = state_is(rec, "ASSOCIATED");
        if (!st.ok) return st;
        if (rec.value("attached_to", "") != inst) return {false, "wrong-instance"};
        const cjson inst_rec = run.get("instance", inst);
        if (inst_rec.value("fip", "") != fip) return {false, "instance-not-tagged"};
        return {true, ""};
    });
    cjson probe;
    if (run.call(7, "network", "probe_connectivity", cjson{{"instance", inst}}, &probe,
                 opts.probe_timeout_ms)) {
        run.check(AssertionId::SshReachable, [&]() -> Check {
            if (probe.value("reachable", false)) return {true, ""};
            return {false, probe.value("reason", "unreachable")};
        });
    }

    run.trace.finish(run.aborted, run.stamp());

    WorkloadResult result;
    result.aborted = run.aborted;
    result.failed_assertions = run.failed;
    result.trace = std::move(run.trace);
    return result;
}

}  // namespace faultline::workload
