#include <doctest.h>

#include "faultline/cloud/catalog.hpp"
#include "faultline/cloud/clock.hpp"
#include "faultline/cloud/datastore.hpp"
#include "faultline/cloud/local_cloud.hpp"
#include "faultline/cloud/log_sink.hpp"
#include "faultline/cloud/resource_rules.hpp"
#include "faultline/engine/inject.hpp"
#include "faultline/engine/scanner.hpp"
#include "faultline/support/jsonio.hpp"
#include "faultline/workload/runner.hpp"
#include "test_util.hpp"

#include <map>
#include <memory>
#include <set>

using namespace faultline;
using support::cjson;

namespace {

cjson minicloud_seed() {
    return cjson(support::load_json_file(testutil::source_dir() / "targets" / "minicloud" /
                                         "seed.json"));
}

cloud::LocalCloud::Options cloud_options(const std::filesystem::path& root,
                                         const std::filesystem::path& target_dir) {
    cloud::LocalCloud::Options opts;
    opts.root = root;
    opts.target_dir = target_dir;
    opts.seed = minicloud_seed();
    return opts;
}

workload::WorkloadResult run_round(cloud::LocalCloud& cloud, const std::string& tag) {
    workload::WorkloadOptions opts;
    opts.round_tag = tag;
    return workload::run_workload(cloud.bus(), cloud.store_client(), opts);
}

std::map<cloud::Severity, int> severity_counts(const std::filesystem::path& logs_dir) {
    std::map<cloud::Severity, int> counts;
    for (const char* name : {"store.log", "compute.log", "volume.log", "network.log"}) {
        for (const auto& line : cloud::parse_log_file(logs_dir / name)) {
            counts[line.sev]++;
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("virtual clock stamps strictly forward") {
    cloud::VirtualClock clock;
    CHECK(clock.now_ms() == 0);
    CHECK(clock.stamp() == 1);
    CHECK(clock.stamp() == 2);
    clock.advance(100);
    CHECK(clock.now_ms() == 102);
    CHECK_THROWS(clock.advance(0));
    CHECK_THROWS(clock.advance(-5));
    clock.reset(7);
    CHECK(clock.now_ms() == 7);
}

TEST_CASE("lifecycle rule table shapes the minicloud kinds") {
    CHECK(cloud::rules_for_kind("image") != nullptr);
    CHECK(cloud::rules_for_kind("addrbook") == nullptr);
    CHECK(cloud::legal_initial_state("image", "QUEUED"));
    CHECK_FALSE(cloud::legal_initial_state("image", "ACTIVE"));
    CHECK(cloud::legal_initial_state("pool", "anything"));

    const auto* edge = cloud::find_edge("volume", "CREATING", "AVAILABLE");
    REQUIRE(edge != nullptr);
    CHECK(edge->settle_ms == 300);
    CHECK(cloud::find_edge("volume", "CREATING", "IN_USE") == nullptr);
    for (const auto& rules : cloud::lifecycle_rules()) {
        for (const auto& e : rules.edges) {
            if (e.to == "ERROR") CHECK(e.settle_ms == 0);
        }
    }
}

TEST_CASE("datastore applies transitions only after their settle delay") {
    cloud::Datastore store(std::nullopt, cjson::object());

    cjson stored = store.put("image", "win", {{"name", "win"}, {"state", "QUEUED"}});
    CHECK(stored.at("id") == "win");
    CHECK(store.now_ms() == 1);

    cjson scheduled = store.transition("image", "win", "ACTIVE");
    CHECK(scheduled.at("scheduled") == "ACTIVE");
    CHECK(scheduled.at("due_ms") == 302);

    CHECK(store.get("image", "win").at("state") == "QUEUED");

    store.advance(298);  // now 301, still before the due stamp
    CHECK(store.get("image", "win").at("state") == "QUEUED");
    store.advance(1);  // now 303
    CHECK(store.get("image", "win").at("state") == "ACTIVE");
}

TEST_CASE("datastore error-path transitions settle immediately") {
    cloud::Datastore store(std::nullopt, cjson::object());
    store.put("instance", "i1", {{"state", "BUILDING"}});
    store.transition("instance", "i1", "ERROR");
    CHECK(store.get("instance", "i1").at("state") == "ERROR");
}

TEST_CASE("datastore refuses writes that bypass the lifecycle") {
    cloud::Datastore store(std::nullopt, cjson::object());
    store.put("volume", "v1", {{"state", "CREATING"}, {"size_gb", 10}});

    const auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const cloud::Datastore::OpError& err) {
            return err.code;
        }
        return std::string("no-error");
    };

    CHECK(code_of([&] { store.put("volume", "v1", {{"state", "CREATING"}}); }) ==
          cloud::kErrConflict);
    CHECK(code_of([&] { store.put("volume", "v2", {{"state", "IN_USE"}}); }) ==
          cloud::kErrBadRequest);
    CHECK(code_of([&] { store.put("volume", "v2", {{"size_gb", 3}}); }) ==
          cloud::kErrBadRequest);
    CHECK(code_of([&] { store.update("volume", "v1", {{"state", "ERROR"}}); }) ==
          cloud::kErrBadRequest);
    CHECK(code_of([&] { store.update("volume", "v1", {{"id", "v9"}}); }) ==
          cloud::kErrBadRequest);
    CHECK(code_of([&] { store.update("volume", "nope", {{"size_gb", 4}}); }) ==
          cloud::kErrNotFound);
    CHECK(code_of([&] { store.get("volume", "nope"); }) == cloud::kErrNotFound);
    CHECK(code_of([&] { store.transition("volume", "v1", "IN_USE"); }) ==
          cloud::kErrBadRequest);

    store.transition("volume", "v1", "AVAILABLE");
    CHECK(code_of([&] { store.transition("volume", "v1", "ERROR"); }) ==
          cloud::kErrConflict);

    // Updates that leave id/state alone are fine while a transition is pending.
    CHECK(store.update("volume", "v1", {{"note", "ok"}, {"id", "v1"}}).at("note") == "ok");
}

TEST_CASE("datastore find matches on field subsets in id order") {
    cloud::Datastore store(std::nullopt, cjson::object());
    store.put("subnet", "s2", {{"network", "net-a"}, {"prefix", "10.0.0."}});
    store.put("subnet", "s1", {{"network", "net-a"}, {"prefix", "10.0.1."}});
    store.put("subnet", "s3", {{"network", "net-b"}, {"prefix", "10.0.2."}});

    cjson hits = store.find("subnet", {{"network", "net-a"}});
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].at("id") == "s1");
    CHECK(hits[1].at("id") == "s2");
    CHECK(store.find("subnet", {{"network", "net-z"}}).empty());
    CHECK(store.find("flavor", cjson::object()).empty());
    CHECK_THROWS_AS(store.find("subnet", cjson::array()), cloud::Datastore::OpError);
}

TEST_CASE("scratch kinds never touch the clock or the dump") {
    cloud::Datastore store(std::nullopt, cjson::object());
    store.put("__svc", "compute", {{"host", "127.0.0.1"}, {"port", 4401}});
    CHECK(store.now_ms() == 0);
    CHECK(store.get("__svc", "compute").at("port") == 4401);
    CHECK(store.now_ms() == 0);
    CHECK_THROWS_AS(store.update("__svc", "compute", {{"port", 1}}),
                    cloud::Datastore::OpError);
    CHECK_THROWS_AS(store.transition("__svc", "compute", "ACTIVE"),
                    cloud::Datastore::OpError);

    cjson dump = store.dump();
    CHECK(dump.at("records").empty());
    store.remove("__svc", "compute");
    CHECK_THROWS_AS(store.get("__svc", "compute"), cloud::Datastore::OpError);
    CHECK(store.now_ms() == 0);
}

TEST_CASE("datastore restores state from snapshot plus transaction tail") {
    auto dir = testutil::scratch_dir("store-persist");
    cjson final_dump;
    {
        cloud::Datastore store(dir, cjson::object());
        store.put("image", "base", {{"name", "base"}, {"state", "QUEUED"}});
        store.transition("image", "base", "ACTIVE");
        store.write_snapshot();  // pending transition crosses the snapshot
        store.put("keypair", "kp", {{"name", "kp"}});
        store.update("keypair", "kp", {{"note", "tail"}});
        store.advance(400);  // settles the image transition in the tail
        store.put("keypair", "gone", {{"name", "gone"}});
        store.remove("keypair", "gone");
        final_dump = store.dump();
    }
    {
        cloud::Datastore reopened(dir, cjson{{"flavor", {{"huge", {{"vcpus", 64}}}}}});
        // Seed must not apply when persisted state exists.
        CHECK_THROWS_AS(reopened.get("flavor", "huge"), cloud::Datastore::OpError);
        CHECK(reopened.get("image", "base").at("state") == "ACTIVE");
        CHECK(reopened.get("keypair", "kp").at("note") == "tail");
        CHECK_THROWS_AS(reopened.get("keypair", "gone"), cloud::Datastore::OpError);
    }

    // Snapshot emission is canonical: same state, same bytes.
    auto dir2 = testutil::scratch_dir("store-persist-2");
    cloud::Datastore a(dir, cjson::object());
    cloud::Datastore b(dir2, cjson::object());
    CHECK(support::canonical_dump(support::json(a.dump())) ==
          support::canonical_dump(support::json(final_dump)));
    a.write_snapshot();
    std::filesystem::copy_file(dir / "snapshot.json", dir2 / "snapshot.json");
    cloud::Datastore c(dir2, cjson::object());
    CHECK(support::canonical_dump(support::json(c.dump())) ==
          support::canonical_dump(support::json(a.dump())));
}

TEST_CASE("log lines render and parse with millisecond stamps") {
    const std::string line =
        cloud::render_log_line(1, cloud::Severity::Info, "store", "store started");
    CHECK(line == "2026-01-01T00:00:00.001Z INFO [store] store started");

    const auto parsed = cloud::parse_log_line(line);
    CHECK(parsed.t_ms == 1);
    CHECK(parsed.sev == cloud::Severity::Info);
    CHECK(parsed.component == "store");
    CHECK(parsed.message == "store started");

    const auto late = cloud::parse_log_line(cloud::render_log_line(
        90'061'234, cloud::Severity::Warning, "volume", "pool low"));
    CHECK(late.t_ms == 90'061'234);
    CHECK_THROWS(cloud::parse_log_line("not a log line"));
}

TEST_CASE("nominal workload provisions the full stack twice without cleanup") {
    auto root = testutil::scratch_dir("cloud-nominal");
    cloud::LocalCloud cloud(
        cloud_options(root, testutil::source_dir() / "targets" / "minicloud"));

    auto r1 = run_round(cloud, "r1");
    CHECK_FALSE(r1.aborted);
    CHECK(r1.failed_assertions == 0);

    const auto apis = r1.trace.api_events();
    const auto checks = r1.trace.assertion_events();
    CHECK(apis.size() == 13);
    CHECK(checks.size() == 13);
    for (const auto& ev : apis) CHECK(ev.ok);
    for (const auto& ev : checks) CHECK(ev.ok);

    // The thirteen checks run in workload order and cover every definition.
    REQUIRE(checks.size() == workload::assertion_defs().size());
    for (size_t i = 0; i < checks.size(); ++i) {
        CHECK(checks[i].id == workload::assertion_defs()[i].name);
        CHECK(checks[i].subsystem == workload::assertion_defs()[i].subsystem);
    }

    // Settling resources really forced the workload to wait.
    std::map<std::string, int> polls;
    for (const auto& ev : checks) polls[ev.id] = ev.polls;
    CHECK(polls.at("IMAGE_ACTIVE") > 1);
    CHECK(polls.at("INSTANCE_ACTIVE") > 1);
    CHECK(polls.at("VOLUME_ATTACHED") > 1);
    CHECK(polls.at("KEYPAIR_CREATED") == 1);
    CHECK(polls.at("SSH_REACHABLE") == 1);

    // Ground truth after round 1.
    CHECK(cloud.store().get("instance", "inst-r1").at("fip") == "fip-r1");
    CHECK(cloud.store().get("volume", "vol-r1").at("attached_to") == "inst-r1");
    CHECK(cloud.store().get("pool", "ports").at("allocated") == 1);

    // Round 2 against the same deployment: fresh names, shared pools.
    auto r2 = run_round(cloud, "r2");
    CHECK_FALSE(r2.aborted);
    CHECK(r2.failed_assertions == 0);
    CHECK(cloud.store().get("pool", "ports").at("allocated") == 2);
    CHECK(cloud.store().get("pool", "fips").at("allocated") == 2);
    CHECK(cloud.store().get("pool", "volume_slots").at("allocated") == 2);
    CHECK(cloud.store().get("quota", "instances").at("used") == 2);

    // Logs: chatty below ERROR, silent at ERROR and above, and the pools
    // warned once per claim because capacity exactly fits the two rounds.
    auto counts = severity_counts(root / "logs");
    CHECK(counts[cloud::Severity::Debug] > 0);
    CHECK(counts[cloud::Severity::Info] > 0);
    CHECK(counts[cloud::Severity::Warning] == 6);
    CHECK(counts[cloud::Severity::Error] == 0);
    CHECK(counts[cloud::Severity::Critical] == 0);

    int pool_warnings = 0;
    for (const char* name : {"compute.log", "volume.log", "network.log"}) {
        for (const auto& line : cloud::parse_log_file(root / "logs" / name)) {
            if (line.sev == cloud::Severity::Warning) {
                CHECK(line.message.find("pool low") != std::string::npos);
                ++pool_warnings;
            }
        }
    }
    CHECK(pool_warnings == 6);

    // Startup order is store, then services in catalog order.
    CHECK(cloud::parse_log_file(root / "logs" / "store.log").at(0).t_ms == 1);
    CHECK(cloud::parse_log_file(root / "logs" / "compute.log").at(0).t_ms == 2);
    CHECK(cloud::parse_log_file(root / "logs" / "volume.log").at(0).t_ms == 3);
    CHECK(cloud::parse_log_file(root / "logs" / "network.log").at(0).t_ms == 4);

    // A third round cannot fit: the volume slot pool is spent, and the
    // service refuses with a deliberate error rather than falling over.
    try {
        cloud.api("volume", "create_volume", cjson{{"name", "vol-r3"}, {"size_gb", 1}});
        FAIL("create_volume should have refused");
    } catch (const cloud::RpcError& err) {
        CHECK(err.code == cloud::kErrNoCapacity);
    }
    auto after = severity_counts(root / "logs");
    CHECK(after[cloud::Severity::Error] == 0);
    CHECK(after[cloud::Severity::Warning] == 7);  // the refusal itself warned

    // No triggers ever fired: the target tree carries no planted faults.
    CHECK_FALSE(std::filesystem::exists(root / "triggers" / "compute.jsonl"));
}

TEST_CASE("identical runs produce byte-identical logs, traces, and state") {
    auto run_one = [](const std::string& tag) {
        auto root = testutil::scratch_dir("cloud-det-" + tag);
        cloud::LocalCloud cloud(
            cloud_options(root, testutil::source_dir() / "targets" / "minicloud"));
        auto r1 = run_round(cloud, "r1");
        auto r2 = run_round(cloud, "r2");
        r1.trace.save(root / "trace-r1.jsonl");
        r2.trace.save(root / "trace-r2.jsonl");
        return std::pair{root, support::canonical_dump(support::json(cloud.store().dump()))};
    };

    auto [root_a, dump_a] = run_one("a");
    auto [root_b, dump_b] = run_one("b");

    CHECK(dump_a == dump_b);
    for (const char* rel : {"logs/store.log", "logs/compute.log", "logs/volume.log",
                            "logs/network.log", "trace-r1.jsonl", "trace-r2.jsonl"}) {
        CHECK(testutil::read_bytes(root_a / rel) == testutil::read_bytes(root_b / rel));
        CHECK_FALSE(testutil::read_bytes(root_a / rel).empty());
    }
}

TEST_CASE("deployed scripts expose a large valid injection surface") {
    const auto cfg =
        engine::default_scan_config(testutil::source_dir() / "targets" / "minicloud");
    const auto tree = engine::TargetTree::load(cfg);
    const auto scan = engine::scan_target(tree, cfg);

    CHECK(scan.files_scanned == 6);
    CHECK(scan.points.size() >= 150);
    CHECK(scan.points.size() <= 600);

    std::set<std::string> ids;
    std::map<engine::BugType, int> by_type;
    for (const auto& point : scan.points) {
        CHECK(!point.subsystem.empty());
        CHECK(ids.insert(point.id).second);
        by_type[point.bug_type]++;
    }
    CHECK(by_type[engine::BugType::WrongParamValue] > 0);
    CHECK(by_type[engine::BugType::MissingParam] > 0);
    CHECK(by_type[engine::BugType::MissingFuncCall] > 0);
    CHECK(by_type[engine::BugType::WrongReturnValue] > 0);
    CHECK(by_type[engine::BugType::MissingExcHandler] > 0);

    int valid = 0;
    int rejected = 0;
    for (const auto& point : scan.points) {
        try {
            engine::make_mutant(tree, point, cfg);
            ++valid;
        } catch (const engine::InjectError&) {
            ++rejected;
        }
    }
    MESSAGE("scan points: " << scan.points.size() << ", valid mutants: " << valid
                            << ", rejected: " << rejected);
    CHECK(valid + rejected == static_cast<int>(scan.points.size()));
    CHECK(static_cast<double>(valid) >=
          0.95 * static_cast<double>(scan.points.size()));
}

TEST_CASE("a planted fault stays dormant until triggered and heals when disabled") {
    const auto cfg =
        engine::default_scan_config(testutil::source_dir() / "targets" / "minicloud");
    const auto tree = engine::TargetTree::load(cfg);
    const auto scan = engine::scan_target(tree, cfg);

    // Drop the association write inside the compute service: downstream
    // reachability depends on it, so round 1 should fail its last check.
    const engine::InjectionPoint* chosen = nullptr;
    for (const auto& point : scan.points) {
        if (point.rel_path == "compute/api.mc" &&
            point.function == "api_record_association" && point.callee == "ds_put" &&
            point.bug_type == engine::BugType::MissingFuncCall) {
            chosen = &point;
        }
    }
    REQUIRE(chosen != nullptr);

    const auto mutant = engine::make_mutant(tree, *chosen, cfg);
    auto target = testutil::scratch_dir("cloud-mutant-target");
    testutil::write_tree(target, mutant.files);

    auto root = testutil::scratch_dir("cloud-mutant-run");
    auto opts = cloud_options(root, target);
    opts.trigger_control = root / "control.txt";
    engine::trigger_file::write(opts.trigger_control, chosen->id, true);
    cloud::LocalCloud cloud(opts);

    auto r1 = run_round(cloud, "r1");
    CHECK_FALSE(r1.aborted);
    CHECK(r1.failed_assertions == 1);
    const auto failed = r1.trace.failed_assertions();
    REQUIRE(failed.size() == 1);
    CHECK(failed[0].id == "SSH_REACHABLE");
    CHECK(failed[0].detail == "no-association");

    const auto fired = support::load_jsonl_file(root / "triggers" / "compute.jsonl");
    REQUIRE(fired.size() == 1);
    CHECK(fired[0].at("point") == chosen->id);
    CHECK(fired[0].at("subsystem") == "compute");

    // The probe's complaint is the only WARNING beyond the pool chatter, and
    // nothing got logged at ERROR: the fault is silent in the logs.
    int probe_warnings = 0;
    for (const auto& line : cloud::parse_log_file(root / "logs" / "network.log")) {
        if (line.sev == cloud::Severity::Warning &&
            line.message.find("no association") != std::string::npos) {
            ++probe_warnings;
        }
    }
    CHECK(probe_warnings == 1);
    auto counts = severity_counts(root / "logs");
    CHECK(counts[cloud::Severity::Error] == 0);

    // Disable the trigger: the very same processes run clean.
    engine::trigger_file::write(opts.trigger_control, chosen->id, false);
    auto r2 = run_round(cloud, "r2");
    CHECK_FALSE(r2.aborted);
    CHECK(r2.failed_assertions == 0);
    CHECK(support::load_jsonl_file(root / "triggers" / "compute.jsonl").size() == 1);
    CHECK(cloud.store().get("instance", "inst-r2").at("fip") == "fip-r2");
}
