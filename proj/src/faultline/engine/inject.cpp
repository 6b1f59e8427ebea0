#include "faultline/engine/inject.hpp"

#include "faultline/engine/locate.hpp"
#include "faultline/engine/rewrite.hpp"
#include "faultline/lang/parser.hpp"
#include "faultline/support/fnv.hpp"
#include "faultline/support/fs.hpp"

#include <fstream>

namespace faultline::engine {

namespace {

std::string slice(const std::string& source, size_t begin, size_t end) {
    return source.substr(begin, end - begin);
}

CallRole role_of(const lang::Stmt& stmt, const lang::Expr& call) {
    if (stmt.kind == lang::StmtKind::ExprStmt && stmt.value.get() == &call) {
        return CallRole::Statement;
    }
    if (stmt.kind == lang::StmtKind::Assign && stmt.value.get() == &call) {
        return CallRole::Assigned;
    }
    return CallRole::Nested;
}

std::string guard_statement(const std::string& point_id, const std::string& faulty,
                            const std::string& original) {
    std::string out = "if __trig(\"" + point_id + "\") {\n";
    out += faulty;
    out += "\n} else {\n";
    out += original;
    out += "\n}";
    return out;
}

}  // namespace

std::string choose_exception_type(const std::string& point_id,
                                  const std::vector<std::string>& types) {
    if (types.empty()) {
        throw InjectError("no-default", "exception type pool is empty");
    }
    const uint64_t h = support::fnv1a64(point_id);
    return types[h % types.size()];
}

Mutant make_mutant(const TargetTree& tree, const InjectionPoint& point, const ScanConfig& cfg) {
    const TargetTree::Entry* entry = tree.find(point.rel_path);
    if (!entry) {
        throw InjectError("file-not-found",
                          point.id + ": no such file in target tree: " + point.rel_path);
    }
    const std::string& source = entry->file.source;

    std::string faulty;
    size_t wrap_begin = 0;
    size_t wrap_end = 0;
    std::string exception_type;

    if (point.bug_type == BugType::MissingExcHandler) {
        const lang::Stmt* try_stmt = locate_try(entry->file, point.site_begin, point.site_end);
        if (!try_stmt) {
            throw InjectError("site-not-found",
                              point.id + ": no try statement at the recorded span");
        }
        const lang::Expr* target = nullptr;
        {
            // Same choice the scanner makes: earliest matched call inside the
            // protected body.
            struct Finder {
                const ScanConfig& cfg;
                const std::string& subsystem;
                const lang::Expr* best = nullptr;
                void visit_expr(const lang::Expr& expr) {
                    if (expr.kind == lang::ExprKind::Call &&
                        cfg.matches_call(subsystem, expr.str_value)) {
                        if (!best || expr.span.begin < best->span.begin) {
                            best = &expr;
                        }
                    }
                    for (const auto& item : expr.items) {
                        visit_expr(*item);
                    }
                    if (expr.lhs) {
                        visit_expr(*expr.lhs);
                    }
                    if (expr.rhs) {
                        visit_expr(*expr.rhs);
                    }
                }
                void visit_block(const lang::Block& block) {
                    for (const auto& stmt : block.stmts) {
                        if (stmt->target) {
                            visit_expr(*stmt->target);
                        }
                        if (stmt->value) {
                            visit_expr(*stmt->value);
                        }
                        if (stmt->iterable) {
                            visit_expr(*stmt->iterable);
                        }
                        for (const auto& arm : stmt->arms) {
                            if (arm.cond) {
                                visit_expr(*arm.cond);
                            }
                            visit_block(arm.block);
                        }
                        visit_block(stmt->body);
                        visit_block(stmt->handler);
                    }
                }
            } finder{cfg, point.subsystem};
            finder.visit_block(try_stmt->body);
            target = finder.best;
        }
        if (!target || target->str_value != point.callee) {
            throw InjectError("site-mismatch",
                              point.id + ": protected body no longer contains a matched call to " +
                                  point.callee);
        }
        exception_type = choose_exception_type(point.id, cfg.exception_types);
        const std::string body_text =
            slice(source, try_stmt->body.inner_span.begin, try_stmt->body.inner_span.end);
        const size_t rel_begin = target->span.begin - try_stmt->body.inner_span.begin;
        const size_t rel_end = target->span.end - try_stmt->body.inner_span.begin;
        const std::string call_text = slice(source, target->span.begin, target->span.end);
        faulty = body_text;
        faulty.replace(rel_begin, rel_end - rel_begin,
                       "__raise_after(" + call_text + ", \"" + exception_type + "\")");
        wrap_begin = try_stmt->span.begin;
        wrap_end = try_stmt->span.end;
    } else {
        LocatedCall located = locate_call(entry->file, point.site_begin, point.site_end);
        if (!located.call) {
            throw InjectError("site-not-found", point.id + ": no call at the recorded span");
        }
        if (located.call->str_value != point.callee) {
            throw InjectError("site-mismatch", point.id + ": call at span is " +
                                                   located.call->str_value + ", expected " +
                                                   point.callee);
        }
        const CallRole role = role_of(*located.stmt, *located.call);
        if (role != point.role) {
            throw InjectError("site-mismatch",
                              point.id + ": call role is " + call_role_name(role) +
                                  ", expected " + call_role_name(point.role));
        }
        const lang::Stmt& stmt = *located.stmt;
        const std::string stmt_text = slice(source, stmt.span.begin, stmt.span.end);
        auto rebase = [&](size_t offset) { return offset - stmt.span.begin; };

        switch (point.bug_type) {
            case BugType::WrongParamValue:
            case BugType::MissingParam: {
                if (point.operand_index < 0 ||
                    static_cast<size_t>(point.operand_index) >= located.call->items.size()) {
                    throw InjectError("site-mismatch",
                                      point.id + ": argument index out of range");
                }
                const lang::Expr& arg = *located.call->items[static_cast<size_t>(point.operand_index)];
                std::string replacement;
                if (point.bug_type == BugType::WrongParamValue) {
                    replacement =
                        "__corrupt(" + slice(source, arg.span.begin, arg.span.end) + ")";
                } else {
                    TargetTree::Callee callee;
                    if (!tree.resolve_callee(point.subsystem, point.callee, callee) ||
                        static_cast<size_t>(point.operand_index) >= callee.params.size() ||
                        !callee.params[static_cast<size_t>(point.operand_index)].has_default) {
                        throw InjectError("no-default",
                                          point.id + ": parameter has no declared default");
                    }
                    replacement = render_literal(
                        callee.params[static_cast<size_t>(point.operand_index)].default_value);
                }
                faulty = stmt_text;
                faulty.replace(rebase(arg.span.begin), arg.span.end - arg.span.begin,
                               replacement);
                break;
            }
            case BugType::MissingFuncCall: {
                if (role == CallRole::Nested) {
                    throw InjectError("call-value-consumed",
                                      point.id + ": cannot drop a call whose value feeds an "
                                                 "enclosing expression");
                }
                faulty = "";
                break;
            }
            case BugType::WrongReturnValue: {
                if (role == CallRole::Statement) {
                    throw InjectError("site-mismatch",
                                      point.id + ": return value is not consumed at this site");
                }
                faulty = stmt_text;
                faulty.replace(rebase(located.call->span.begin),
                               located.call->span.end - located.call->span.begin,
                               "__corrupt(" +
                                   slice(source, located.call->span.begin,
                                         located.call->span.end) +
                                   ")");
                break;
            }
            default:
                throw InjectError("site-mismatch", point.id + ": unexpected bug type");
        }
        wrap_begin = stmt.span.begin;
        wrap_end = stmt.span.end;
    }

    const std::string original_text = slice(source, wrap_begin, wrap_end);
    const std::string guarded = guard_statement(point.id, faulty, original_text);
    std::string mutated =
        apply_splices(source, {Splice{wrap_begin, wrap_end, guarded}});

    lang::ParseError parse_error;
    if (!lang::parse_source(mutated, parse_error)) {
        throw InjectError("mutant-parse-failure",
                          point.id + ": " + parse_error.to_string());
    }

    Mutant mutant;
    mutant.point = point;
    mutant.exception_type = exception_type;
    mutant.mutated_rel_path = point.rel_path;
    mutant.original_source = source;
    mutant.mutated_source = mutated;
    for (const auto& e : tree.entries()) {
        mutant.files.emplace_back(e.file.rel_path,
                                  e.file.rel_path == point.rel_path ? mutated : e.file.source);
    }
    return mutant;
}

namespace trigger_file {

void write(const std::filesystem::path& path, const std::string& point_id, bool enabled) {
    support::write_file(path, std::string(enabled ? "enabled" : "disabled") + " " + point_id +
                                  "\n");
}

bool enabled_for(const std::filesystem::path& path, const std::string& point_id) {
    std::ifstream in(path);
    if (!in) {
        return false;
    }
    std::string state;
    std::string id;
    in >> state >> id;
    return state == "enabled" && id == point_id;
}

}  // namespace trigger_file

}  // namespace faultline::engine
