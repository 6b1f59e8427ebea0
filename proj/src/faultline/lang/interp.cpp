#include "faultline/lang/interp.hpp"

#include <stdexcept>

namespace faultline::lang {

namespace {

[[noreturn]] void raise(const std::string& type, const std::string& message) {
    throw ScriptError{type, message, {}};
}

std::vector<BuiltinSig> make_signatures() {
    using J = nlohmann::json;
    auto p = [](std::string name) { return BuiltinParam{std::move(name), false, nullptr}; };
    auto pd = [](std::string name, J def) {
        return BuiltinParam{std::move(name), true, std::move(def)};
    };
    std::vector<BuiltinSig> sigs = {
        // generic helpers
        {"len", {p("value")}},
        {"str", {p("value")}},
        {"get", {p("record"), p("key"), pd("fallback", nullptr)}},
        {"has", {p("record"), p("key")}},
        {"keys", {p("record")}},
        {"append", {p("items"), p("value")}},
        {"remove", {p("items"), p("value")}},
        {"contains", {p("items"), p("value")}},
        {"first", {p("items")}},
        {"rest", {p("items")}},
        // datastore access (host)
        {"ds_get", {p("kind"), p("id")}},
        {"ds_find", {p("kind"), pd("filter", J::object())}},
        {"ds_put", {p("kind"), p("id"), p("record")}},
        {"ds_update", {p("kind"), p("id"), p("fields")}},
        {"ds_transition", {p("kind"), p("id"), p("to_state")}},
        {"ds_delete", {p("kind"), p("id")}},
        // peer services (host)
        {"rpc_call", {p("subsystem"), p("endpoint"), pd("payload", J::object())}},
        // logging (host)
        {"log_debug", {p("message")}},
        {"log_info", {p("message")}},
        {"log_warning", {p("message")}},
        {"log_error", {p("message")}},
        {"log_critical", {p("message")}},
        // request rejection (host)
        {"fail", {p("code"), pd("message", "")}},
        // per-process memo cache (host)
        {"cache_get", {p("key"), pd("fallback", nullptr)}},
        {"cache_put", {p("key"), p("value")}},
        // instrumentation internals; never written by hand in target code
        {"__trig", {p("point_id")}},
        {"__mark", {p("point_ids")}},
        {"__corrupt", {p("value")}},
        {"__raise_after", {p("value"), p("error_type")}},
        {"__seq", {p("first_value"), p("second_value")}},
    };
    return sigs;
}

}  // namespace

const std::vector<BuiltinSig>& builtin_signatures() {
    static const std::vector<BuiltinSig> sigs = make_signatures();
    return sigs;
}

const BuiltinSig* find_builtin_signature(const std::string& name) {
    for (const auto& sig : builtin_signatures()) {
        if (sig.name == name) {
            return &sig;
        }
    }
    return nullptr;
}

void Module::add_file(SourceFile file) {
    files_.push_back(std::move(file));
    const SourceFile& stored = files_.back();
    for (const auto& fn : stored.functions) {
        if (find_builtin_signature(fn.name)) {
            throw std::runtime_error("function '" + fn.name + "' in " + stored.rel_path +
                                     " shadows a builtin");
        }
        auto [it, inserted] = functions_.emplace(fn.name, &fn);
        if (!inserted) {
            throw std::runtime_error("duplicate function '" + fn.name + "' in module (" +
                                     stored.rel_path + ")");
        }
    }
}

const FnDef* Module::find_function(const std::string& name) const {
    auto it = functions_.find(name);
    return it == functions_.end() ? nullptr : it->second;
}

bool Module::has_function(const std::string& name) const {
    return functions_.count(name) > 0;
}

Interpreter::Interpreter(const Module& module, Limits limits)
    : module_(module), limits_(limits) {
    auto expect_list = [](const Value& v, const char* who) -> Value::List& {
        if (v.kind() != Value::Kind::List) {
            raise("TypeError", std::string(who) + " expects a list, got " +
                                   Value::kind_name(v.kind()));
        }
        return *v.list_ref();
    };
    auto expect_map = [](const Value& v, const char* who) -> Value::Map& {
        if (v.kind() != Value::Kind::Map) {
            raise("TypeError", std::string(who) + " expects a map, got " +
                                   Value::kind_name(v.kind()));
        }
        return *v.map_ref();
    };
    auto expect_str = [](const Value& v, const char* who) -> const std::string& {
        if (v.kind() != Value::Kind::Str) {
            raise("TypeError", std::string(who) + " expects a string, got " +
                                   Value::kind_name(v.kind()));
        }
        return v.as_str();
    };

    register_builtin("len", [expect_list, expect_map](std::vector<Value>& args) {
        const Value& v = args[0];
        switch (v.kind()) {
            case Value::Kind::Str: return Value::integer(static_cast<int64_t>(v.as_str().size()));
            case Value::Kind::List:
                return Value::integer(static_cast<int64_t>(v.list_ref()->size()));
            case Value::Kind::Map: return Value::integer(static_cast<int64_t>(v.map_ref()->size()));
            default:
                raise("TypeError", std::string("len expects a string, list or map, got ") +
                                       Value::kind_name(v.kind()));
        }
    });
    register_builtin("str", [](std::vector<Value>& args) { return Value::str(args[0].repr()); });
    register_builtin("get", [expect_map, expect_str](std::vector<Value>& args) {
        Value::Map& m = expect_map(args[0], "get");
        auto it = m.find(expect_str(args[1], "get"));
        return it == m.end() ? args[2] : it->second;
    });
    register_builtin("has", [expect_map, expect_str](std::vector<Value>& args) {
        Value::Map& m = expect_map(args[0], "has");
        return Value::boolean(m.count(expect_str(args[1], "has")) > 0);
    });
    register_builtin("keys", [expect_map](std::vector<Value>& args) {
        Value::Map& m = expect_map(args[0], "keys");
        Value::List out;
        out.reserve(m.size());
        for (const auto& [key, value] : m) {
            (void)value;
            out.push_back(Value::str(key));
        }
        return Value::list(std::move(out));
    });
    register_builtin("append", [expect_list](std::vector<Value>& args) {
        expect_list(args[0], "append").push_back(args[1]);
        return args[0];
    });
    register_builtin("remove", [expect_list](std::vector<Value>& args) {
        Value::List& items = expect_list(args[0], "remove");
        for (auto it = items.begin(); it != items.end(); ++it) {
            if (it->equals(args[1])) {
                items.erase(it);
                return args[0];
            }
        }
        raise("KeyError", "remove: value not present: " + args[1].repr());
    });
    register_builtin("contains", [expect_list](std::vector<Value>& args) {
        for (const auto& item : expect_list(args[0], "contains")) {
            if (item.equals(args[1])) {
                return Value::boolean(true);
            }
        }
        return Value::boolean(false);
    });
    register_builtin("first", [expect_list](std::vector<Value>& args) {
        Value::List& items = expect_list(args[0], "first");
        if (items.empty()) {
            raise("IndexError", "first: list is empty");
        }
        return items.front();
    });
    register_builtin("rest", [expect_list](std::vector<Value>& args) {
        Value::List& items = expect_list(args[0], "rest");
        if (items.empty()) {
            raise("IndexError", "rest: list is empty");
        }
        return Value::list(Value::List(items.begin() + 1, items.end()));
    });
    // Instrumentation defaults: inert outside a service shell, so plain
    // interpreter runs of instrumented or mutated code behave like the
    // original as long as no trigger is enabled.
    register_builtin("__trig", [](std::vector<Value>&) { return Value::boolean(false); });
    register_builtin("__mark", [](std::vector<Value>&) { return Value::null(); });
    register_builtin("__seq", [](std::vector<Value>& args) { return args[1]; });
    register_builtin("__raise_after", [expect_str](std::vector<Value>& args) -> Value {
        const std::string& type = expect_str(args[1], "__raise_after");
        raise(type, "injected " + type);
    });
}

void Interpreter::register_builtin(const std::string& name, Builtin fn) {
    if (!find_builtin_signature(name)) {
        throw std::runtime_error("register_builtin: '" + name + "' is not in the catalog");
    }
    builtins_[name] = std::move(fn);
}

void Interpreter::charge_step() {
    if (--steps_left_ < 0) {
        raise("StepLimit", "execution budget exhausted");
    }
}

Value Interpreter::call_function(const std::string& name, std::vector<Value> args) {
    steps_left_ = limits_.max_steps;
    return invoke(name, std::move(args));
}

Value Interpreter::invoke(const std::string& name, std::vector<Value> args) {
    charge_step();
    if (const FnDef* fn = module_.find_function(name)) {
        return run_function(*fn, std::move(args));
    }
    auto it = builtins_.find(name);
    if (it != builtins_.end()) {
        const BuiltinSig* sig = find_builtin_signature(name);
        if (args.size() > sig->params.size()) {
            raise("ArityError", name + " expects at most " + std::to_string(sig->params.size()) +
                                    " arguments, got " + std::to_string(args.size()));
        }
        for (size_t i = args.size(); i < sig->params.size(); ++i) {
            if (!sig->params[i].has_default) {
                raise("ArityError", name + ": missing argument '" + sig->params[i].name + "'");
            }
            args.push_back(Value::from_json(sig->params[i].default_value));
        }
        return it->second(args);
    }
    if (find_builtin_signature(name)) {
        raise("NameError", "builtin '" + name + "' is not available in this context");
    }
    raise("NameError", "unknown function '" + name + "'");
}

Value Interpreter::run_function(const FnDef& fn, std::vector<Value> args) {
    if (args.size() > fn.params.size()) {
        raise("ArityError", fn.name + " expects at most " + std::to_string(fn.params.size()) +
                                " arguments, got " + std::to_string(args.size()));
    }
    if (++depth_ > limits_.max_depth) {
        --depth_;
        raise("DepthLimit", "call depth limit reached in " + fn.name);
    }
    Frame frame;
    for (size_t i = 0; i < fn.params.size(); ++i) {
        if (i < args.size()) {
            frame.locals[fn.params[i].name] = std::move(args[i]);
        } else if (fn.params[i].has_default) {
            frame.locals[fn.params[i].name] = Value::from_json(fn.params[i].default_value);
        } else {
            --depth_;
            raise("ArityError", fn.name + ": missing argument '" + fn.params[i].name + "'");
        }
    }
    Value returned;
    try {
        exec_block(fn.body, frame, returned);
    } catch (...) {
        --depth_;
        throw;
    }
    --depth_;
    return returned;
}

Interpreter::Flow Interpreter::exec_block(const Block& block, Frame& frame, Value& returned) {
    for (const auto& stmt : block.stmts) {
        if (exec_stmt(*stmt, frame, returned) == Flow::Returned) {
            return Flow::Returned;
        }
    }
    return Flow::Normal;
}

Interpreter::Flow Interpreter::exec_stmt(const Stmt& stmt, Frame& frame, Value& returned) {
    charge_step();
    switch (stmt.kind) {
        case StmtKind::Assign:
            assign_target(*stmt.target, eval(*stmt.value, frame), frame);
            return Flow::Normal;
        case StmtKind::ExprStmt:
            eval(*stmt.value, frame);
            return Flow::Normal;
        case StmtKind::If: {
            for (const auto& arm : stmt.arms) {
                if (!arm.cond || eval(*arm.cond, frame).truthy()) {
                    return exec_block(arm.block, frame, returned);
                }
            }
            return Flow::Normal;
        }
        case StmtKind::For: {
            const Value iterable = eval(*stmt.iterable, frame);
            Value::List snapshot;
            if (iterable.kind() == Value::Kind::List) {
                snapshot = *iterable.list_ref();
            } else if (iterable.kind() == Value::Kind::Map) {
                for (const auto& [key, value] : *iterable.map_ref()) {
                    (void)value;
                    snapshot.push_back(Value::str(key));
                }
            } else {
                raise("TypeError", std::string("cannot iterate over ") +
                                       Value::kind_name(iterable.kind()));
            }
            for (auto& item : snapshot) {
                frame.locals[stmt.name] = item;
                if (exec_block(stmt.body, frame, returned) == Flow::Returned) {
                    return Flow::Returned;
                }
            }
            return Flow::Normal;
        }
        case StmtKind::Try: {
            try {
                return exec_block(stmt.body, frame, returned);
            } catch (const ScriptError& err) {
                if (!stmt.catch_type.empty() && stmt.catch_type != err.type) {
                    throw;
                }
                if (!stmt.catch_var.empty()) {
                    Value::Map bound = err.detail;
                    bound["type"] = Value::str(err.type);
                    bound["message"] = Value::str(err.message);
                    frame.locals[stmt.catch_var] = Value::map(std::move(bound));
                }
                return exec_block(stmt.handler, frame, returned);
            }
        }
        case StmtKind::Raise: {
            std::string message;
            if (stmt.value) {
                message = eval(*stmt.value, frame).repr();
            }
            throw ScriptError{stmt.name, message, {}};
        }
        case StmtKind::Return:
            returned = stmt.value ? eval(*stmt.value, frame) : Value::null();
            return Flow::Returned;
    }
    return Flow::Normal;
}

void Interpreter::assign_target(const Expr& target, Value value, Frame& frame) {
    if (target.kind == ExprKind::Ident) {
        frame.locals[target.str_value] = std::move(value);
        return;
    }
    // Index chain: evaluate the container expression, then set the final slot.
    const Value container = eval(*target.lhs, frame);
    const Value key = eval(*target.rhs, frame);
    if (container.kind() == Value::Kind::Map) {
        if (key.kind() != Value::Kind::Str) {
            raise("TypeError", "map keys must be strings");
        }
        (*container.map_ref())[key.as_str()] = std::move(value);
        return;
    }
    if (container.kind() == Value::Kind::List) {
        if (key.kind() != Value::Kind::Int) {
            raise("TypeError", "list indices must be integers");
        }
        const int64_t i = key.as_int();
        if (i < 0 || static_cast<size_t>(i) >= container.list_ref()->size()) {
            raise("IndexError", "list index " + std::to_string(i) + " out of range");
        }
        (*container.list_ref())[static_cast<size_t>(i)] = std::move(value);
        return;
    }
    raise("TypeError", std::string("cannot assign into ") +
                           Value::kind_name(container.kind()));
}

Value Interpreter::eval(const Expr& expr, Frame& frame) {
    charge_step();
    switch (expr.kind) {
        case ExprKind::NullLit: return Value::null();
        case ExprKind::BoolLit: return Value::boolean(expr.bool_value);
        case ExprKind::IntLit: return Value::integer(expr.int_value);
        case ExprKind::StrLit: return Value::str(expr.str_value);
        case ExprKind::Ident: {
            auto it = frame.locals.find(expr.str_value);
            if (it == frame.locals.end()) {
                raise("NameError", "unknown name '" + expr.str_value + "'");
            }
            return it->second;
        }
        case ExprKind::ListLit: {
            Value::List items;
            items.reserve(expr.items.size());
            for (const auto& item : expr.items) {
                items.push_back(eval(*item, frame));
            }
            return Value::list(std::move(items));
        }
        case ExprKind::MapLit: {
            Value::Map entries;
            for (size_t i = 0; i < expr.items.size(); ++i) {
                entries[expr.keys[i]] = eval(*expr.items[i], frame);
            }
            return Value::map(std::move(entries));
        }
        case ExprKind::Call: {
            std::vector<Value> args;
            args.reserve(expr.items.size());
            for (const auto& arg : expr.items) {
                args.push_back(eval(*arg, frame));
            }
            return invoke(expr.str_value, std::move(args));
        }
        case ExprKind::Index: {
            const Value base = eval(*expr.lhs, frame);
            const Value key = eval(*expr.rhs, frame);
            if (base.kind() == Value::Kind::Map) {
                if (key.kind() != Value::Kind::Str) {
                    raise("TypeError", "map keys must be strings");
                }
                auto it = base.map_ref()->find(key.as_str());
                if (it == base.map_ref()->end()) {
                    raise("KeyError", "missing key '" + key.as_str() + "'");
                }
                return it->second;
            }
            if (base.kind() == Value::Kind::List) {
                if (key.kind() != Value::Kind::Int) {
                    raise("TypeError", "list indices must be integers");
                }
                const int64_t i = key.as_int();
                if (i < 0 || static_cast<size_t>(i) >= base.list_ref()->size()) {
                    raise("IndexError", "list index " + std::to_string(i) + " out of range");
                }
                return (*base.list_ref())[static_cast<size_t>(i)];
            }
            raise("TypeError", std::string("cannot index into ") +
                                   Value::kind_name(base.kind()));
        }
        case ExprKind::Unary: {
            if (expr.un_op == UnOp::Not) {
                return Value::boolean(!eval(*expr.lhs, frame).truthy());
            }
            const Value operand = eval(*expr.lhs, frame);
            if (operand.kind() == Value::Kind::Int) {
                return Value::integer(-operand.as_int());
            }
            if (operand.kind() == Value::Kind::Float) {
                return Value::real(-operand.as_float());
            }
            raise("TypeError", std::string("cannot negate ") +
                                   Value::kind_name(operand.kind()));
        }
        case ExprKind::Binary:
            return eval_binary(expr, frame);
    }
    return Value::null();
}

Value Interpreter::eval_binary(const Expr& expr, Frame& frame) {
    if (expr.bin_op == BinOp::And) {
        const Value lhs = eval(*expr.lhs, frame);
        return lhs.truthy() ? eval(*expr.rhs, frame) : lhs;
    }
    if (expr.bin_op == BinOp::Or) {
        const Value lhs = eval(*expr.lhs, frame);
        return lhs.truthy() ? lhs : eval(*expr.rhs, frame);
    }

    const Value lhs = eval(*expr.lhs, frame);
    const Value rhs = eval(*expr.rhs, frame);

    switch (expr.bin_op) {
        case BinOp::Eq: return Value::boolean(lhs.equals(rhs));
        case BinOp::Ne: return Value::boolean(!lhs.equals(rhs));
        default: break;
    }

    const bool lhs_num = lhs.kind() == Value::Kind::Int || lhs.kind() == Value::Kind::Float;
    const bool rhs_num = rhs.kind() == Value::Kind::Int || rhs.kind() == Value::Kind::Float;
    const bool both_int = lhs.kind() == Value::Kind::Int && rhs.kind() == Value::Kind::Int;
    const bool both_str = lhs.kind() == Value::Kind::Str && rhs.kind() == Value::Kind::Str;

    auto type_error = [&]() -> Value {
        raise("TypeError", std::string("unsupported operand types ") +
                               Value::kind_name(lhs.kind()) + " and " +
                               Value::kind_name(rhs.kind()));
    };

    switch (expr.bin_op) {
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: {
            int cmp = 0;
            if (lhs_num && rhs_num) {
                const double a = lhs.as_float();
                const double b = rhs.as_float();
                cmp = a < b ? -1 : (a > b ? 1 : 0);
            } else if (both_str) {
                cmp = lhs.as_str().compare(rhs.as_str());
            } else {
                return type_error();
            }
            switch (expr.bin_op) {
                case BinOp::Lt: return Value::boolean(cmp < 0);
                case BinOp::Le: return Value::boolean(cmp <= 0);
                case BinOp::Gt: return Value::boolean(cmp > 0);
                default: return Value::boolean(cmp >= 0);
            }
        }
        case BinOp::Add:
            if (both_int) {
                return Value::integer(lhs.as_int() + rhs.as_int());
            }
            if (lhs_num && rhs_num) {
                return Value::real(lhs.as_float() + rhs.as_float());
            }
            if (both_str) {
                return Value::str(lhs.as_str() + rhs.as_str());
            }
            if (lhs.kind() == Value::Kind::List && rhs.kind() == Value::Kind::List) {
                Value::List out = *lhs.list_ref();
                out.insert(out.end(), rhs.list_ref()->begin(), rhs.list_ref()->end());
                return Value::list(std::move(out));
            }
            return type_error();
        case BinOp::Sub:
            if (both_int) {
                return Value::integer(lhs.as_int() - rhs.as_int());
            }
            if (lhs_num && rhs_num) {
                return Value::real(lhs.as_float() - rhs.as_float());
            }
            return type_error();
        case BinOp::Mul:
            if (both_int) {
                return Value::integer(lhs.as_int() * rhs.as_int());
            }
            if (lhs_num && rhs_num) {
                return Value::real(lhs.as_float() * rhs.as_float());
            }
            return type_error();
        case BinOp::Div:
            if (both_int) {
                if (rhs.as_int() == 0) {
                    raise("ZeroDivision", "integer division by zero");
                }
                return Value::integer(lhs.as_int() / rhs.as_int());
            }
            if (lhs_num && rhs_num) {
                if (rhs.as_float() == 0.0) {
                    raise("ZeroDivision", "division by zero");
                }
                return Value::real(lhs.as_float() / rhs.as_float());
            }
            return type_error();
        case BinOp::Mod:
            if (both_int) {
                if (rhs.as_int() == 0) {
                    raise("ZeroDivision", "modulo by zero");
                }
                return Value::integer(lhs.as_int() % rhs.as_int());
            }
            return type_error();
        default:
            return type_error();
    }
}

}  // namespace faultline::lang
