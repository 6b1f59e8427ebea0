#pragma once

#include "faultline/lang/ast.hpp"
#include "faultline/lang/value.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace faultline::lang {

// Declared parameter shape of a built-in function: interpreter validates
// arity against it, and the scanner reads defaults from it when enumerating
// droppable-argument sites.
struct BuiltinParam {
    std::string name;
    bool has_default = false;
    nlohmann::json default_value;
};

struct BuiltinSig {
    std::string name;
    std::vector<BuiltinParam> params;
};

// Full catalog of built-in names the language surface admits, including the
// host-provided ones (datastore access, logging, peer calls) and the internal
// instrumentation helpers (double-underscore names).
const std::vector<BuiltinSig>& builtin_signatures();
const BuiltinSig* find_builtin_signature(const std::string& name);

// All script files of one service, with function lookup by name. Function
// names are a single flat namespace per module; collisions (including
// shadowing a builtin) are configuration errors.
class Module {
public:
    void add_file(SourceFile file);
    const FnDef* find_function(const std::string& name) const;
    bool has_function(const std::string& name) const;
    const std::vector<SourceFile>& files() const { return files_; }

private:
    std::vector<SourceFile> files_;
    std::map<std::string, const FnDef*> functions_;
};

using Builtin = std::function<Value(std::vector<Value>&)>;

// Tree-walking evaluator. Scripts have no loops without bounds and no
// recursion deeper than max_depth; a step budget catches anything that still
// manages to run away (it surfaces as a script error, not a hang).
class Interpreter {
public:
    struct Limits {
        int64_t max_steps = 2000000;
        int max_depth = 64;
    };

    explicit Interpreter(const Module& module) : Interpreter(module, Limits{}) {}
    Interpreter(const Module& module, Limits limits);

    // Replaces any existing binding; the name must be in the builtin catalog.
    void register_builtin(const std::string& name, Builtin fn);

    // Entry point used by service shells. Resets the step budget.
    Value call_function(const std::string& name, std::vector<Value> args);

private:
    struct Frame {
        std::map<std::string, Value> locals;
    };

    enum class Flow { Normal, Returned };

    const Module& module_;
    Limits limits_;
    int64_t steps_left_ = 0;
    int depth_ = 0;
    std::map<std::string, Builtin> builtins_;

    void charge_step();
    Value invoke(const std::string& name, std::vector<Value> args);
    Value run_function(const FnDef& fn, std::vector<Value> args);
    Flow exec_block(const Block& block, Frame& frame, Value& returned);
    Flow exec_stmt(const Stmt& stmt, Frame& frame, Value& returned);
    Value eval(const Expr& expr, Frame& frame);
    Value eval_binary(const Expr& expr, Frame& frame);
    void assign_target(const Expr& target, Value value, Frame& frame);
};

}  // namespace faultline::lang
