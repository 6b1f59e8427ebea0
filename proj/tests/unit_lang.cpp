#include "faultline/lang/interp.hpp"
#include "faultline/lang/parser.hpp"

#include <doctest.h>

using namespace faultline;

namespace {

lang::SourceFile parse_ok(const std::string& source) {
    lang::ParseError error;
    auto file = lang::parse_source(source, error);
    REQUIRE_MESSAGE(file.has_value(), error.to_string());
    return std::move(*file);
}

// Convenience: build a module around one source and call an entry function.
lang::Value run(const std::string& source, const std::string& fn,
                std::vector<lang::Value> args = {}) {
    lang::Module module;
    module.add_file(parse_ok(source));
    lang::Interpreter interp(module);
    return interp.call_function(fn, std::move(args));
}

}  // namespace

TEST_CASE("lexer tracks byte spans exactly") {
    const std::string src = "def f() {\n  x = 12 + foo(\"hi\")\n}\n";
    lang::LexError error;
    auto tokens = lang::lex(src, &error);
    REQUIRE(!tokens.empty());
    for (const auto& t : tokens) {
        if (t.kind == lang::TokenKind::EndOfFile) {
            continue;
        }
        CHECK(t.span.end <= src.size());
        CHECK(t.span.begin < t.span.end);
    }
    // The string literal token covers the quotes; its decoded text does not.
    bool found_string = false;
    for (const auto& t : tokens) {
        if (t.kind == lang::TokenKind::String) {
            found_string = true;
            CHECK(src.substr(t.span.begin, t.span.end - t.span.begin) == "\"hi\"");
            CHECK(t.text == "hi");
        }
    }
    CHECK(found_string);
}

TEST_CASE("lexer reports bad input") {
    lang::LexError error;
    auto tokens = lang::lex("def f() { x = \"unterminated }\n", &error);
    CHECK(tokens.empty());
    CHECK(error.message.find("unterminated") != std::string::npos);

    tokens = lang::lex("def f() { y = 1 ? 2 }", &error);
    CHECK(tokens.empty());
}

TEST_CASE("parser produces spans that slice back to the original text") {
    const std::string src =
        "def boot(req) {\n"
        "    image = ds_get(\"image\", req[\"image_id\"])\n"
        "    if image[\"state\"] == \"ACTIVE\" {\n"
        "        return image\n"
        "    }\n"
        "    return null\n"
        "}\n";
    auto file = parse_ok(src);
    REQUIRE(file.functions.size() == 1);
    const auto& fn = file.functions[0];
    REQUIRE(fn.body.stmts.size() == 3);

    const auto& assign = *fn.body.stmts[0];
    CHECK(assign.kind == lang::StmtKind::Assign);
    CHECK(src.substr(assign.span.begin, assign.span.end - assign.span.begin) ==
          "image = ds_get(\"image\", req[\"image_id\"])");

    const auto& call = *assign.value;
    REQUIRE(call.kind == lang::ExprKind::Call);
    CHECK(src.substr(call.span.begin, call.span.end - call.span.begin) ==
          "ds_get(\"image\", req[\"image_id\"])");
    REQUIRE(call.items.size() == 2);
    CHECK(src.substr(call.items[1]->span.begin,
                     call.items[1]->span.end - call.items[1]->span.begin) ==
          "req[\"image_id\"]");
}

TEST_CASE("parser handles multi-line literals and chained blocks") {
    const std::string src =
        "def f() {\n"
        "    m = {\n"
        "        \"a\": [1, 2,\n"
        "               3],\n"
        "        \"b\": {\"c\": true}\n"
        "    }\n"
        "    if m[\"b\"][\"c\"] {\n"
        "        return len(m[\"a\"])\n"
        "    }\n"
        "    else {\n"
        "        return 0\n"
        "    }\n"
        "}\n";
    CHECK(run(src, "f").as_int() == 3);
}

TEST_CASE("parser rejects malformed input with positions") {
    lang::ParseError error;
    CHECK(!lang::parse_source("def f( {", error));
    CHECK(error.line >= 1);
    CHECK(!lang::parse_source("def f() { x = }", error));
    CHECK(!lang::parse_source("def f() { try { x = 1 } }", error));
    CHECK(error.message.find("catch") != std::string::npos);
    CHECK(!lang::parse_source("def f() { 1 = 2 }", error));
    CHECK(!lang::parse_source("x = 1", error));  // statements only inside functions
}

TEST_CASE("arithmetic, comparison and truthiness") {
    const std::string src =
        "def f() {\n"
        "    parts = []\n"
        "    append(parts, 7 / 2)\n"
        "    append(parts, 7 % 3)\n"
        "    append(parts, \"a\" + \"b\")\n"
        "    append(parts, [1] + [2])\n"
        "    append(parts, 2 < 10)\n"
        "    append(parts, \"b\" > \"a\")\n"
        "    append(parts, not \"\")\n"
        "    append(parts, null == null)\n"
        "    return parts\n"
        "}\n";
    auto out = run(src, "f");
    REQUIRE(out.kind() == lang::Value::Kind::List);
    const auto& items = *out.list_ref();
    CHECK(items[0].as_int() == 3);
    CHECK(items[1].as_int() == 1);
    CHECK(items[2].as_str() == "ab");
    CHECK(items[3].list_ref()->size() == 2);
    CHECK(items[4].as_bool());
    CHECK(items[5].as_bool());
    CHECK(items[6].as_bool());
    CHECK(items[7].as_bool());
}

TEST_CASE("maps and lists alias through bindings") {
    const std::string src =
        "def f() {\n"
        "    rec = {\"state\": \"NEW\", \"tags\": []}\n"
        "    alias = rec\n"
        "    alias[\"state\"] = \"ACTIVE\"\n"
        "    append(rec[\"tags\"], \"x\")\n"
        "    return [rec[\"state\"], len(alias[\"tags\"])]\n"
        "}\n";
    auto out = run(src, "f");
    CHECK((*out.list_ref())[0].as_str() == "ACTIVE");
    CHECK((*out.list_ref())[1].as_int() == 1);
}

TEST_CASE("try/catch matches by error type and binds details") {
    const std::string src =
        "def f(which) {\n"
        "    try {\n"
        "        if which == 1 {\n"
        "            raise NotFound(\"missing thing\")\n"
        "        }\n"
        "        raise Conflict(\"already there\")\n"
        "    } catch NotFound as e {\n"
        "        return \"caught \" + e[\"message\"]\n"
        "    }\n"
        "}\n";
    CHECK(run(src, "f", {lang::Value::integer(1)}).as_str() == "caught missing thing");
    CHECK_THROWS_AS(run(src, "f", {lang::Value::integer(2)}), lang::ScriptError);
    try {
        run(src, "f", {lang::Value::integer(2)});
    } catch (const lang::ScriptError& err) {
        CHECK(err.type == "Conflict");
        CHECK(err.message == "already there");
    }
}

TEST_CASE("catch-all handler catches intrinsic errors") {
    const std::string src =
        "def f() {\n"
        "    try {\n"
        "        x = {}\n"
        "        return x[\"nope\"]\n"
        "    } catch as e {\n"
        "        return e[\"type\"]\n"
        "    }\n"
        "}\n";
    CHECK(run(src, "f").as_str() == "KeyError");
}

TEST_CASE("intrinsic error types") {
    try {
        run("def f() { return missing_fn() }", "f");
        FAIL("expected NameError");
    } catch (const lang::ScriptError& err) {
        CHECK(err.type == "NameError");
        CHECK(err.message.find("missing_fn") != std::string::npos);
    }
    CHECK_THROWS_AS(run("def f() { return 1 / 0 }", "f"), lang::ScriptError);
    CHECK_THROWS_AS(run("def f() { x = [1]; return x[5] }", "f"), lang::ScriptError);
    CHECK_THROWS_AS(run("def f() { return 1 + \"s\" }", "f"), lang::ScriptError);
    CHECK_THROWS_AS(run("def f() { return undefined_name }", "f"), lang::ScriptError);
}

TEST_CASE("function defaults fill missing arguments") {
    const std::string src =
        "def pick(kind, fallback=\"none\") {\n"
        "    return kind + \"/\" + fallback\n"
        "}\n"
        "def f() {\n"
        "    return [pick(\"a\"), pick(\"a\", \"b\")]\n"
        "}\n";
    auto out = run(src, "f");
    CHECK((*out.list_ref())[0].as_str() == "a/none");
    CHECK((*out.list_ref())[1].as_str() == "a/b");
}

TEST_CASE("arity errors are script errors") {
    const std::string src = "def g(a, b) { return a }\ndef f() { return g(1) }\n";
    try {
        run(src, "f");
        FAIL("expected ArityError");
    } catch (const lang::ScriptError& err) {
        CHECK(err.type == "ArityError");
    }
}

TEST_CASE("recursion depth is capped") {
    const std::string src = "def f(n) { return f(n + 1) }\n";
    try {
        run(src, "f", {lang::Value::integer(0)});
        FAIL("expected DepthLimit");
    } catch (const lang::ScriptError& err) {
        CHECK(err.type == "DepthLimit");
    }
}

TEST_CASE("step budget stops runaway work") {
    // 200 * 200 iterations of a few steps each exceeds a 10k budget.
    const std::string src =
        "def f() {\n"
        "    items = []\n"
        "    n = 0\n"
        "    for i in range_list() {\n"
        "        for j in range_list() {\n"
        "            n = n + 1\n"
        "        }\n"
        "    }\n"
        "    return n\n"
        "}\n"
        "def range_list() {\n"
        "    items = []\n"
        "    k = 0\n"
        "    for x in [1,1,1,1,1,1,1,1,1,1] {\n"
        "        for y in [1,1,1,1,1,1,1,1,1,1] {\n"
        "            append(items, k)\n"
        "            k = k + 1\n"
        "        }\n"
        "    }\n"
        "    return items\n"
        "}\n";
    lang::Module module;
    module.add_file(parse_ok(src));
    lang::Interpreter::Limits limits;
    limits.max_steps = 10000;
    lang::Interpreter interp(module, limits);
    try {
        interp.call_function("f", {});
        FAIL("expected StepLimit");
    } catch (const lang::ScriptError& err) {
        CHECK(err.type == "StepLimit");
    }
}

TEST_CASE("for iterates maps in sorted key order") {
    const std::string src =
        "def f() {\n"
        "    m = {\"b\": 1, \"a\": 2, \"c\": 3}\n"
        "    order = \"\"\n"
        "    for k in m {\n"
        "        order = order + k\n"
        "    }\n"
        "    return order\n"
        "}\n";
    CHECK(run(src, "f").as_str() == "abc");
}

TEST_CASE("module rejects duplicate and shadowing definitions") {
    lang::Module module;
    module.add_file(parse_ok("def f() { return 1 }\n"));
    CHECK_THROWS(module.add_file(parse_ok("def f() { return 2 }\n")));
    lang::Module other;
    CHECK_THROWS(other.add_file(parse_ok("def len(x) { return 0 }\n")));
}

TEST_CASE("value json round trip") {
    const std::string src =
        "def f() {\n"
        "    return {\"id\": \"i-1\", \"vcpus\": 2, \"up\": true, \"tags\": [\"a\"],"
        " \"meta\": {\"x\": null}}\n"
        "}\n";
    auto out = run(src, "f");
    auto j = out.to_json();
    auto back = lang::Value::from_json(j);
    CHECK(back.equals(out));
    CHECK(j["vcpus"] == 2);
    CHECK(j["meta"]["x"].is_null());
}

TEST_CASE("builtin arity uses catalog defaults") {
    // get() has a defaulted third parameter.
    const std::string src =
        "def f() {\n"
        "    m = {\"a\": 1}\n"
        "    return [get(m, \"a\"), get(m, \"zz\"), get(m, \"zz\", 9)]\n"
        "}\n";
    auto out = run(src, "f");
    CHECK((*out.list_ref())[0].as_int() == 1);
    CHECK((*out.list_ref())[1].is_null());
    CHECK((*out.list_ref())[2].as_int() == 9);
}
