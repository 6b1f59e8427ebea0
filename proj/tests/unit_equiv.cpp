#include "faultline/engine/inject.hpp"
#include "faultline/engine/instrument.hpp"
#include "faultline/engine/scanner.hpp"
#include "faultline/lang/interp.hpp"
#include "faultline/lang/parser.hpp"
#include "faultline/support/fs.hpp"

#include <doctest.h>

#include <string>
#include <vector>

#include "test_util.hpp"

using namespace faultline;

namespace {

// One scripted call with recorded side effects and outcome, so two module
// variants can be compared event-for-event.
struct DriveLog {
    std::vector<std::string> events;
    std::string outcome;

    bool operator==(const DriveLog& other) const {
        return events == other.events && outcome == other.outcome;
    }
};

std::string render_call(const std::string& name, const std::vector<lang::Value>& args) {
    std::string out = name + "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += args[i].repr();
    }
    return out + ")";
}

void register_stubs(lang::Interpreter& interp, std::vector<std::string>& events) {
    auto record = [&events](const std::string& name) {
        return [&events, name](std::vector<lang::Value>& args) {
            events.push_back(render_call(name, args));
            return lang::Value::null();
        };
    };
    interp.register_builtin("ds_get", [&events](std::vector<lang::Value>& args) {
        events.push_back(render_call("ds_get", args));
        if (args[1].repr() == "missing") {
            throw lang::ScriptError{"NotFound", "no record", {}};
        }
        lang::Value::Map rec;
        rec["id"] = args[1];
        rec["state"] = lang::Value::str("ACTIVE");
        return lang::Value::map(std::move(rec));
    });
    interp.register_builtin("ds_find", [&events](std::vector<lang::Value>& args) {
        events.push_back(render_call("ds_find", args));
        lang::Value::Map a;
        a["id"] = lang::Value::str("a");
        lang::Value::Map b;
        b["id"] = lang::Value::str("b");
        return lang::Value::list({lang::Value::map(std::move(a)), lang::Value::map(std::move(b))});
    });
    interp.register_builtin("ds_update", record("ds_update"));
    interp.register_builtin("ds_delete", record("ds_delete"));
    interp.register_builtin("cache_put", record("cache_put"));
    interp.register_builtin("log_debug", record("log_debug"));
}

struct Drive {
    std::string entry;
    std::vector<lang::Value> args;
};

std::vector<Drive> fixture_drives() {
    auto req = [](const char* instance, const char* volume, int64_t port) {
        lang::Value::Map m;
        m["instance_id"] = lang::Value::str(instance);
        m["volume_id"] = lang::Value::str(volume);
        m["port"] = lang::Value::integer(port);
        return lang::Value::map(std::move(m));
    };
    lang::Value::Map stopped;
    stopped["id"] = lang::Value::str("i1");
    stopped["state"] = lang::Value::str("SHUTOFF");
    lang::Value::Map vol;
    vol["id"] = lang::Value::str("v1");
    return {
        {"attach_volume_api", {req("i1", "v1", 80)}},
        {"attach_volume_api", {req("i2", "missing", 8)}},
        {"purge_instance", {lang::Value::str("i7")}},
        {"attach_volume",
         {lang::Value::map(std::move(stopped)), lang::Value::map(std::move(vol)),
          lang::Value::null()}},
        {"quota_exceeded", {lang::Value::integer(0), lang::Value::integer(1)}},
    };
}

lang::Module module_from_files(const std::vector<std::pair<std::string, std::string>>& files) {
    lang::Module module;
    for (const auto& [rel_path, source] : files) {
        lang::ParseError err;
        auto parsed = lang::parse_source(source, err);
        REQUIRE(parsed.has_value());
        parsed->rel_path = rel_path;
        module.add_file(std::move(*parsed));
    }
    return module;
}

DriveLog run_drive(const lang::Module& module, const Drive& drive) {
    DriveLog log;
    lang::Interpreter interp(module);
    register_stubs(interp, log.events);
    try {
        lang::Value result = interp.call_function(drive.entry, drive.args);
        log.outcome = "return " + result.repr();
    } catch (const lang::ScriptError& err) {
        log.outcome = "error " + err.type + ": " + err.message;
    }
    return log;
}

std::vector<DriveLog> run_all(const lang::Module& module) {
    std::vector<DriveLog> logs;
    for (const auto& drive : fixture_drives()) {
        logs.push_back(run_drive(module, drive));
    }
    return logs;
}

}  // namespace

TEST_CASE("baseline drives exercise every fixture path") {
    const std::string source = support::read_file(testutil::fixture_path("compute_api.mc"));
    auto module = module_from_files({{"compute/api.mc", source}});
    auto logs = run_all(module);
    REQUIRE(logs.size() == 5);

    // Happy path: get instance, get volume, update, audit.
    CHECK(logs[0].events.size() == 4);
    CHECK(logs[0].outcome == "return {\"attachment\":\"v1:i1\"}");

    // Unknown volume: store miss is caught and converted.
    CHECK(logs[1].outcome == "error Invalid: unknown volume missing");

    // Purge: find two matches, quota trip, delete, cache refresh.
    CHECK(logs[2].events.size() == 3);
    CHECK(logs[2].events[1] == "ds_delete(instance, i7)");
    CHECK(logs[2].outcome == "return null");

    // Direct call with an inactive instance raises before any writes.
    CHECK(logs[3].events.empty());
    CHECK(logs[3].outcome == "error Invalid: instance not active");

    CHECK(logs[4].outcome == "return false");
}

TEST_CASE("every mutant with its trigger off behaves exactly like the original") {
    const std::string source = support::read_file(testutil::fixture_path("compute_api.mc"));
    auto cfg = engine::default_scan_config(testutil::source_dir() / "tests" / "fixtures");
    auto tree = engine::TargetTree::load_from_sources({{"compute/api.mc", source}}, cfg);
    auto points = engine::scan_target(tree, cfg).points;

    auto baseline = run_all(module_from_files({{"compute/api.mc", source}}));

    int compared = 0;
    for (const auto& point : points) {
        engine::Mutant mutant;
        try {
            mutant = engine::make_mutant(tree, point, cfg);
        } catch (const engine::InjectError&) {
            continue;
        }
        auto module = module_from_files(mutant.files);
        auto logs = run_all(module);
        for (size_t i = 0; i < logs.size(); ++i) {
            INFO("point ", point.id, " drive ", i);
            CHECK(logs[i] == baseline[i]);
        }
        ++compared;
    }
    CHECK(compared == 33);
}

TEST_CASE("coverage instrumentation is transparent to script behavior") {
    const std::string source = support::read_file(testutil::fixture_path("compute_api.mc"));
    auto cfg = engine::default_scan_config(testutil::source_dir() / "tests" / "fixtures");
    auto tree = engine::TargetTree::load_from_sources({{"compute/api.mc", source}}, cfg);
    auto points = engine::scan_target(tree, cfg).points;
    auto instrumented = engine::instrument_coverage(tree, points);

    auto baseline = run_all(module_from_files({{"compute/api.mc", source}}));
    auto covered = run_all(module_from_files(instrumented.files));
    REQUIRE(baseline.size() == covered.size());
    for (size_t i = 0; i < baseline.size(); ++i) {
        INFO("drive ", i);
        CHECK(baseline[i] == covered[i]);
    }
}
