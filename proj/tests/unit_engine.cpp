#include "faultline/engine/corrupt.hpp"
#include "faultline/engine/inject.hpp"
#include "faultline/engine/instrument.hpp"
#include "faultline/engine/scanner.hpp"
#include "faultline/support/fs.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "test_util.hpp"

using namespace faultline;

namespace {

engine::ScanConfig fixture_config() {
    // target_root is unused when loading from sources, but must be set.
    auto cfg = engine::default_scan_config(testutil::source_dir() / "tests" / "fixtures");
    return cfg;
}

engine::TargetTree fixture_tree() {
    const std::string source = support::read_file(testutil::fixture_path("compute_api.mc"));
    return engine::TargetTree::load_from_sources({{"compute/api.mc", source}},
                                                 fixture_config());
}

std::map<engine::BugType, int> count_by_type(const std::vector<engine::InjectionPoint>& points) {
    std::map<engine::BugType, int> counts;
    for (const auto& p : points) {
        counts[p.bug_type]++;
    }
    return counts;
}

// Independent enumeration oracle: walks the AST with its own bookkeeping and
// applies the counting rules directly, without reusing scanner internals.
struct OracleCounts {
    int wrong_param = 0;
    int missing_param = 0;
    int missing_call = 0;
    int wrong_return = 0;
    int missing_handler = 0;

    int total() const {
        return wrong_param + missing_param + missing_call + wrong_return + missing_handler;
    }
};

OracleCounts oracle_enumerate(const engine::TargetTree& tree, const engine::ScanConfig& cfg) {
    OracleCounts counts;

    struct Ctx {
        const engine::TargetTree& tree;
        const engine::ScanConfig& cfg;
        const std::string& subsystem;
        OracleCounts& counts;
        std::set<const lang::Stmt*> trys_hit;  // trys with >= 1 matched call

        void expr(const lang::Expr& e, bool value_used,
                  std::vector<const lang::Stmt*>& open_trys) {
            if (e.kind == lang::ExprKind::Call) {
                for (const auto& arg : e.items) {
                    expr(*arg, true, open_trys);
                }
                if (cfg.matches_call(subsystem, e.str_value)) {
                    counts.missing_call += 1;
                    if (value_used) {
                        counts.wrong_return += 1;
                    }
                    for (const auto& arg : e.items) {
                        if (arg->kind != lang::ExprKind::NullLit) {
                            counts.wrong_param += 1;
                        }
                    }
                    engine::TargetTree::Callee callee;
                    if (tree.resolve_callee(subsystem, e.str_value, callee)) {
                        for (size_t i = 0; i < e.items.size() && i < callee.params.size(); ++i) {
                            if (callee.params[i].has_default) {
                                counts.missing_param += 1;
                            }
                        }
                    }
                    for (const lang::Stmt* t : open_trys) {
                        trys_hit.insert(t);
                    }
                }
                return;
            }
            for (const auto& item : e.items) {
                expr(*item, true, open_trys);
            }
            if (e.lhs) {
                expr(*e.lhs, true, open_trys);
            }
            if (e.rhs) {
                expr(*e.rhs, true, open_trys);
            }
        }

        void stmt(const lang::Stmt& s, std::vector<const lang::Stmt*>& open_trys) {
            switch (s.kind) {
                case lang::StmtKind::Assign:
                    if (s.target->kind == lang::ExprKind::Index) {
                        expr(*s.target, true, open_trys);
                    }
                    // Whole-RHS calls are "assigned": value is consumed.
                    expr(*s.value, true, open_trys);
                    break;
                case lang::StmtKind::ExprStmt:
                    if (s.value->kind == lang::ExprKind::Call) {
                        // Result discarded: arguments are still used values.
                        const lang::Expr& call = *s.value;
                        for (const auto& arg : call.items) {
                            expr(*arg, true, open_trys);
                        }
                        if (cfg.matches_call(subsystem, call.str_value)) {
                            counts.missing_call += 1;
                            for (const auto& arg : call.items) {
                                if (arg->kind != lang::ExprKind::NullLit) {
                                    counts.wrong_param += 1;
                                }
                            }
                            engine::TargetTree::Callee callee;
                            if (tree.resolve_callee(subsystem, call.str_value, callee)) {
                                for (size_t i = 0;
                                     i < call.items.size() && i < callee.params.size(); ++i) {
                                    if (callee.params[i].has_default) {
                                        counts.missing_param += 1;
                                    }
                                }
                            }
                            for (const lang::Stmt* t : open_trys) {
                                trys_hit.insert(t);
                            }
                        }
                    } else {
                        expr(*s.value, true, open_trys);
                    }
                    break;
                case lang::StmtKind::Raise:
                case lang::StmtKind::Return:
                    if (s.value) {
                        expr(*s.value, true, open_trys);
                    }
                    break;
                case lang::StmtKind::If:
                    for (const auto& arm : s.arms) {
                        if (arm.cond) {
                            expr(*arm.cond, true, open_trys);
                        }
                        block(arm.block, open_trys);
                    }
                    break;
                case lang::StmtKind::For:
                    expr(*s.iterable, true, open_trys);
                    block(s.body, open_trys);
                    break;
                case lang::StmtKind::Try: {
                    open_trys.push_back(&s);
                    block(s.body, open_trys);
                    open_trys.pop_back();
                    block(s.handler, open_trys);
                    break;
                }
            }
        }

        void block(const lang::Block& b, std::vector<const lang::Stmt*>& open_trys) {
            for (const auto& s : b.stmts) {
                stmt(*s, open_trys);
            }
        }
    };

    for (const auto& entry : tree.entries()) {
        Ctx ctx{tree, cfg, entry.subsystem, counts, {}};
        std::vector<const lang::Stmt*> open;
        for (const auto& fn : entry.file.functions) {
            ctx.block(fn.body, open);
        }
        counts.missing_handler += static_cast<int>(ctx.trys_hit.size());
    }
    return counts;
}

// Wait: the scanner treats a whole-assignment-RHS call as consumed (it can be
// wrong-return mutated). The oracle's Assign case above passes value_used =
// true through expr(), matching that rule.

}  // namespace

TEST_CASE("scan of the fixture matches the hand-enumerated catalog") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto result = engine::scan_target(tree, cfg);

    // Hand count (see fixture): nine matched calls plus one protected body.
    //   attach_volume_api: ds_get 4, fetch_volume 3, attach_volume 6
    //   attach_volume:     ds_update 4
    //   fetch_volume:      ds_get 4 (+1 handler point)
    //   purge_instance:    ds_find 5, quota_exceeded 4, ds_delete 3,
    //                      refresh_quota_cache 1
    CHECK(result.points.size() == 35);
    auto counts = count_by_type(result.points);
    CHECK(counts[engine::BugType::WrongParamValue] == 17);
    CHECK(counts[engine::BugType::MissingParam] == 2);
    CHECK(counts[engine::BugType::MissingFuncCall] == 9);
    CHECK(counts[engine::BugType::WrongReturnValue] == 6);
    CHECK(counts[engine::BugType::MissingExcHandler] == 1);

    // The worked example: a three-argument call with one defaulted parameter,
    // result assigned, yields exactly six points.
    int attach_points = 0;
    for (const auto& p : result.points) {
        if (p.callee == "attach_volume") {
            ++attach_points;
            CHECK(p.role == engine::CallRole::Assigned);
        }
    }
    CHECK(attach_points == 6);
}

TEST_CASE("scan agrees with an independent counting oracle") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto result = engine::scan_target(tree, cfg);
    auto oracle = oracle_enumerate(tree, cfg);
    auto counts = count_by_type(result.points);
    CHECK(counts[engine::BugType::WrongParamValue] == oracle.wrong_param);
    CHECK(counts[engine::BugType::MissingParam] == oracle.missing_param);
    CHECK(counts[engine::BugType::MissingFuncCall] == oracle.missing_call);
    CHECK(counts[engine::BugType::WrongReturnValue] == oracle.wrong_return);
    CHECK(counts[engine::BugType::MissingExcHandler] == oracle.missing_handler);
    CHECK(static_cast<int>(result.points.size()) == oracle.total());
}

TEST_CASE("scan output is deterministic and ids are unique and ordered") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto first = engine::scan_target(tree, cfg);
    auto second = engine::scan_target(fixture_tree(), cfg);
    REQUIRE(first.points.size() == second.points.size());
    std::set<std::string> ids;
    for (size_t i = 0; i < first.points.size(); ++i) {
        CHECK(first.points[i].to_json() == second.points[i].to_json());
        ids.insert(first.points[i].id);
    }
    CHECK(ids.size() == first.points.size());

    // Catalog order: file, then site position, then bug type, then operand.
    for (size_t i = 1; i < first.points.size(); ++i) {
        const auto& a = first.points[i - 1];
        const auto& b = first.points[i];
        auto key = [](const engine::InjectionPoint& p) {
            return std::make_tuple(p.rel_path, p.site_begin,
                                   engine::bug_type_rank(p.bug_type), p.operand_index);
        };
        CHECK(key(a) < key(b));
    }
}

TEST_CASE("point json round trip") {
    auto result = engine::scan_target(fixture_tree(), fixture_config());
    for (const auto& p : result.points) {
        auto back = engine::InjectionPoint::from_json(p.to_json());
        CHECK(back.id == p.id);
        CHECK(back.site_begin == p.site_begin);
        CHECK(back.site_end == p.site_end);
        CHECK(back.operand_index == p.operand_index);
        CHECK(back.bug_type == p.bug_type);
        CHECK(back.role == p.role);
    }
}

TEST_CASE("unparsable input is rejected with file and position") {
    auto cfg = fixture_config();
    try {
        engine::TargetTree::load_from_sources(
            {{"compute/bad.mc", "def broken( {\n"}}, cfg);
        FAIL("expected parse failure");
    } catch (const std::runtime_error& err) {
        const std::string what = err.what();
        CHECK(what.find("compute/bad.mc") != std::string::npos);
        CHECK(what.find("line") != std::string::npos);
    }
}

TEST_CASE("corruption rule table") {
    using support::json;
    CHECK(engine::corrupt("object-reference", json::object({{"id", "x"}})) == json(nullptr));
    CHECK(engine::corrupt("integer", 5) == json(-1));
    CHECK(engine::corrupt("string", "abc") == json(""));
    CHECK(engine::corrupt("boolean", true) == json(false));
    CHECK(engine::corrupt("boolean", false) == json(true));
    CHECK(engine::corrupt("collection", json::array({1, 2})) == json::array());

    CHECK_THROWS_AS(engine::corrupt("float", 1.5), engine::CorruptError);
    CHECK_THROWS_AS(engine::corrupt("integer", "5"), engine::CorruptError);
    CHECK_THROWS_AS(engine::corrupt("whatever", 5), engine::CorruptError);

    // Runtime form used by planted calls.
    CHECK(engine::corrupt_value(lang::Value::integer(7)).as_int() == -1);
    CHECK(engine::corrupt_value(lang::Value::boolean(true)).as_bool() == false);
    CHECK(engine::corrupt_value(lang::Value::str("x")).as_str().empty());
    CHECK(engine::corrupt_value(lang::Value::map({{"a", lang::Value::integer(1)}})).is_null());
    CHECK(engine::corrupt_value(lang::Value::list({lang::Value::integer(1)}))
              .list_ref()
              ->empty());
    CHECK_THROWS_AS(engine::corrupt_value(lang::Value::null()), lang::ScriptError);
    CHECK_THROWS_AS(engine::corrupt_value(lang::Value::real(0.5)), lang::ScriptError);
}

namespace {

engine::InjectionPoint find_point(const std::vector<engine::InjectionPoint>& points,
                                  const std::string& callee, engine::BugType type,
                                  int operand = -1, const std::string& function = "") {
    for (const auto& p : points) {
        if (p.callee == callee && p.bug_type == type &&
            (operand < 0 || p.operand_index == operand) &&
            (function.empty() || p.function == function)) {
            return p;
        }
    }
    FAIL(("no such point: " + callee));
    return {};
}

}  // namespace

TEST_CASE("mutants parse, differ in one file, and keep the original in the else branch") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto result = engine::scan_target(tree, cfg);

    int valid = 0;
    int rejected = 0;
    for (const auto& point : result.points) {
        try {
            auto mutant = engine::make_mutant(tree, point, cfg);
            ++valid;
            CHECK(mutant.mutated_source != mutant.original_source);
            CHECK(mutant.mutated_source.find("__trig(\"" + point.id + "\")") !=
                  std::string::npos);
            // Exactly one guard per mutant.
            size_t occurrences = 0;
            size_t at = 0;
            while ((at = mutant.mutated_source.find("__trig(", at)) != std::string::npos) {
                ++occurrences;
                at += 1;
            }
            CHECK(occurrences == 1);
        } catch (const engine::InjectError& err) {
            ++rejected;
            CHECK(err.code() == "call-value-consumed");
        }
    }
    // Fixture has two value-consumed matched calls (a return expression and
    // an if condition); their missing-call points are the only rejections.
    CHECK(rejected == 2);
    CHECK(valid == 33);
}

TEST_CASE("missing-call mutant drops the statement in the faulty branch") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto points = engine::scan_target(tree, cfg).points;
    auto point = find_point(points, "refresh_quota_cache", engine::BugType::MissingFuncCall);
    auto mutant = engine::make_mutant(tree, point, cfg);
    const std::string expect = "if __trig(\"" + point.id + "\") {\n\n} else {\nrefresh_quota_cache()\n}";
    CHECK(mutant.mutated_source.find(expect) != std::string::npos);
}

TEST_CASE("wrong-return mutant wraps the call, dropped-argument mutant substitutes the default") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto points = engine::scan_target(tree, cfg).points;

    auto wrv = find_point(points, "ds_get", engine::BugType::WrongReturnValue, -1,
                          "attach_volume_api");
    auto m1 = engine::make_mutant(tree, wrv, cfg);
    CHECK(m1.mutated_source.find("__corrupt(ds_get(\"instance\", req[\"instance_id\"]))") !=
          std::string::npos);

    auto mp = find_point(points, "attach_volume", engine::BugType::MissingParam, 2);
    auto m2 = engine::make_mutant(tree, mp, cfg);
    CHECK(m2.mutated_source.find("attach_volume(instance, vol, null)") != std::string::npos);

    auto wpv = find_point(points, "ds_find", engine::BugType::WrongParamValue, 1);
    auto m3 = engine::make_mutant(tree, wpv, cfg);
    CHECK(m3.mutated_source.find("ds_find(\"instance\", __corrupt({\"id\": instance_id}))") !=
          std::string::npos);
}

TEST_CASE("handler-removal mutant inlines the body and re-raises after the call") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto points = engine::scan_target(tree, cfg).points;
    auto meh = find_point(points, "ds_get", engine::BugType::MissingExcHandler);
    auto mutant = engine::make_mutant(tree, meh, cfg);
    CHECK(!mutant.exception_type.empty());
    CHECK(mutant.mutated_source.find("__raise_after(ds_get(\"volume\", volume_id), \"" +
                                     mutant.exception_type + "\")") != std::string::npos);
    // The faulty branch must not contain the catch clause.
    const size_t guard = mutant.mutated_source.find("if __trig(");
    const size_t else_at = mutant.mutated_source.find("} else {", guard);
    const std::string faulty = mutant.mutated_source.substr(guard, else_at - guard);
    CHECK(faulty.find("catch") == std::string::npos);

    // Deterministic and stable across calls.
    auto again = engine::make_mutant(tree, meh, cfg);
    CHECK(again.mutated_source == mutant.mutated_source);
    CHECK(engine::choose_exception_type(meh.id, cfg.exception_types) == mutant.exception_type);
}

TEST_CASE("instrumentation adds one marker per site and keeps sources parseable") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto points = engine::scan_target(tree, cfg).points;
    auto instrumented = engine::instrument_coverage(tree, points);

    // Nine call sites plus one protected body.
    CHECK(instrumented.marker_count == 10);
    REQUIRE(instrumented.files.size() == 1);
    const std::string& text = instrumented.files[0].second;

    size_t marks = 0;
    size_t at = 0;
    while ((at = text.find("__mark(", at)) != std::string::npos) {
        ++marks;
        at += 1;
    }
    CHECK(marks == 10);

    // Every point id appears in exactly one marker.
    for (const auto& p : points) {
        CHECK(text.find(p.id) != std::string::npos);
    }

    // Instrumenting with no points is the identity.
    auto untouched = engine::instrument_coverage(tree, {});
    CHECK(untouched.marker_count == 0);
    CHECK(untouched.files[0].second == tree.entries()[0].file.source);
}

TEST_CASE("stale points are rejected with typed errors") {
    auto cfg = fixture_config();
    auto tree = fixture_tree();
    auto points = engine::scan_target(tree, cfg).points;

    auto moved = points[0];
    moved.site_begin += 1;
    moved.site_end += 1;
    try {
        engine::make_mutant(tree, moved, cfg);
        FAIL("expected site-not-found");
    } catch (const engine::InjectError& err) {
        CHECK(err.code() == "site-not-found");
    }

    auto renamed = find_point(points, "ds_update", engine::BugType::MissingFuncCall);
    renamed.callee = "ds_delete";
    try {
        engine::make_mutant(tree, renamed, cfg);
        FAIL("expected site-mismatch");
    } catch (const engine::InjectError& err) {
        CHECK(err.code() == "site-mismatch");
    }

    auto lost = points[0];
    lost.rel_path = "compute/nope.mc";
    try {
        engine::make_mutant(tree, lost, cfg);
        FAIL("expected file-not-found");
    } catch (const engine::InjectError& err) {
        CHECK(err.code() == "file-not-found");
    }
}

TEST_CASE("trigger control file round trip") {
    auto dir = testutil::scratch_dir("trigger-file");
    const auto path = dir / "trigger.ctl";
    CHECK(!engine::trigger_file::enabled_for(path, "p1"));
    engine::trigger_file::write(path, "p1", true);
    CHECK(engine::trigger_file::enabled_for(path, "p1"));
    CHECK(!engine::trigger_file::enabled_for(path, "p2"));
    engine::trigger_file::write(path, "p1", false);
    CHECK(!engine::trigger_file::enabled_for(path, "p1"));
}
