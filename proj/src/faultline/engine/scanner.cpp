#include "faultline/engine/scanner.hpp"

#include "faultline/support/fs.hpp"

#include <algorithm>
#include <stdexcept>

namespace faultline::engine {

namespace {

lang::SourceFile parse_or_throw(const std::string& rel_path, const std::string& source) {
    lang::ParseError error;
    auto parsed = lang::parse_source(source, error);
    if (!parsed) {
        throw std::runtime_error(rel_path + ": " + error.to_string());
    }
    parsed->rel_path = rel_path;
    return std::move(*parsed);
}

}  // namespace

TargetTree TargetTree::load(const ScanConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& [subsystem, dir] : cfg.subsystems) {
        (void)subsystem;
        const auto root = cfg.target_root / dir;
        for (const auto& rel : support::list_files(root, ".mc")) {
            const std::string rel_path = dir + "/" + rel.generic_string();
            files.emplace_back(rel_path, support::read_file(root / rel));
        }
    }
    return load_from_sources(files, cfg);
}

TargetTree TargetTree::load_from_sources(
    const std::vector<std::pair<std::string, std::string>>& files, const ScanConfig& cfg) {
    TargetTree tree;
    for (const auto& [rel_path, source] : files) {
        const std::string subsystem = cfg.subsystem_for(rel_path);
        if (subsystem.empty()) {
            throw std::runtime_error("file outside any configured subsystem: " + rel_path);
        }
        Entry entry;
        entry.subsystem = subsystem;
        entry.file = parse_or_throw(rel_path, source);
        tree.entries_.push_back(std::move(entry));
    }
    std::sort(tree.entries_.begin(), tree.entries_.end(),
              [](const Entry& a, const Entry& b) { return a.file.rel_path < b.file.rel_path; });
    tree.index();
    return tree;
}

void TargetTree::index() {
    modules_.clear();
    for (const auto& entry : entries_) {
        lang::SourceFile copy;
        copy.rel_path = entry.file.rel_path;
        copy.source = entry.file.source;
        lang::ParseError error;
        auto reparsed = lang::parse_source(copy.source, error);
        // Entries were parsed once already; a failure here means memory
        // corruption, not bad input.
        if (!reparsed) {
            throw std::logic_error("reparse failed for " + copy.rel_path);
        }
        reparsed->rel_path = copy.rel_path;
        modules_[entry.subsystem].add_file(std::move(*reparsed));
    }
}

const TargetTree::Entry* TargetTree::find(const std::string& rel_path) const {
    for (const auto& entry : entries_) {
        if (entry.file.rel_path == rel_path) {
            return &entry;
        }
    }
    return nullptr;
}

bool TargetTree::resolve_callee(const std::string& subsystem, const std::string& name,
                                Callee& out) const {
    auto it = modules_.find(subsystem);
    if (it != modules_.end()) {
        if (const lang::FnDef* fn = it->second.find_function(name)) {
            out.params.clear();
            for (const auto& p : fn->params) {
                out.params.push_back({p.name, p.has_default, p.default_value});
            }
            return true;
        }
    }
    if (const lang::BuiltinSig* sig = lang::find_builtin_signature(name)) {
        out.params = sig->params;
        return true;
    }
    return false;
}

namespace {

struct Walker {
    const ScanConfig& cfg;
    const TargetTree& tree;
    const std::string& subsystem;
    const lang::SourceFile& file;
    std::vector<InjectionPoint>& out;

    std::string current_function;
    // Statement the trigger guard would wrap: always the innermost statement
    // enclosing the expression being visited.
    const lang::Stmt* current_stmt = nullptr;
    // Open try statements whose protected body encloses the visit position,
    // innermost last. Paired with the first matched call seen inside.
    struct OpenTry {
        const lang::Stmt* stmt;
        const lang::Expr* first_matched_call = nullptr;
    };
    std::vector<OpenTry> try_stack;
    std::vector<std::pair<const lang::Stmt*, const lang::Expr*>> handler_targets;

    void walk_file() {
        for (const auto& fn : file.functions) {
            current_function = fn.name;
            walk_block(fn.body);
        }
    }

    void walk_block(const lang::Block& block) {
        for (const auto& stmt : block.stmts) {
            walk_stmt(*stmt);
        }
    }

    void walk_stmt(const lang::Stmt& stmt) {
        const lang::Stmt* saved = current_stmt;
        current_stmt = &stmt;
        switch (stmt.kind) {
            case lang::StmtKind::Assign: {
                const bool whole_rhs = stmt.value->kind == lang::ExprKind::Call;
                if (stmt.target->kind == lang::ExprKind::Index) {
                    walk_expr(*stmt.target, nullptr);
                }
                walk_expr(*stmt.value, whole_rhs ? &stmt : nullptr);
                break;
            }
            case lang::StmtKind::ExprStmt:
                walk_expr(*stmt.value, stmt.value->kind == lang::ExprKind::Call ? &stmt : nullptr);
                break;
            case lang::StmtKind::Raise:
                if (stmt.value) {
                    walk_expr(*stmt.value, nullptr);
                }
                break;
            case lang::StmtKind::Return:
                if (stmt.value) {
                    walk_expr(*stmt.value, nullptr);
                }
                break;
            case lang::StmtKind::If:
                for (const auto& arm : stmt.arms) {
                    if (arm.cond) {
                        // The guard would wrap the whole if statement.
                        walk_expr(*arm.cond, nullptr);
                    }
                    current_stmt = saved;
                    walk_block(arm.block);
                    current_stmt = &stmt;
                }
                break;
            case lang::StmtKind::For:
                walk_expr(*stmt.iterable, nullptr);
                current_stmt = saved;
                walk_block(stmt.body);
                current_stmt = &stmt;
                break;
            case lang::StmtKind::Try: {
                try_stack.push_back({&stmt, nullptr});
                current_stmt = saved;
                walk_block(stmt.body);
                OpenTry closed = try_stack.back();
                try_stack.pop_back();
                if (closed.first_matched_call) {
                    handler_targets.emplace_back(closed.stmt, closed.first_matched_call);
                }
                walk_block(stmt.handler);
                current_stmt = &stmt;
                break;
            }
        }
        current_stmt = saved;
    }

    // `direct_owner` is non-null when `expr` is a call sitting directly in
    // statement position (whole expression statement or whole assignment RHS).
    void walk_expr(const lang::Expr& expr, const lang::Stmt* direct_owner) {
        switch (expr.kind) {
            case lang::ExprKind::Call: {
                for (const auto& arg : expr.items) {
                    walk_expr(*arg, nullptr);
                }
                if (cfg.matches_call(subsystem, expr.str_value)) {
                    emit_call_points(expr, direct_owner);
                }
                break;
            }
            case lang::ExprKind::ListLit:
            case lang::ExprKind::MapLit:
                for (const auto& item : expr.items) {
                    walk_expr(*item, nullptr);
                }
                break;
            case lang::ExprKind::Index:
                walk_expr(*expr.lhs, nullptr);
                walk_expr(*expr.rhs, nullptr);
                break;
            case lang::ExprKind::Unary:
                walk_expr(*expr.lhs, nullptr);
                break;
            case lang::ExprKind::Binary:
                walk_expr(*expr.lhs, nullptr);
                walk_expr(*expr.rhs, nullptr);
                break;
            default:
                break;
        }
    }

    void emit_call_points(const lang::Expr& call, const lang::Stmt* direct_owner) {
        // Track the earliest matched call of each open protected body; call
        // arguments are visited before the enclosing call, so compare spans
        // rather than trusting visit order.
        for (auto& open : try_stack) {
            if (!open.first_matched_call ||
                call.span.begin < open.first_matched_call->span.begin) {
                open.first_matched_call = &call;
            }
        }

        CallRole role = CallRole::Nested;
        if (direct_owner) {
            role = direct_owner->kind == lang::StmtKind::Assign ? CallRole::Assigned
                                                                : CallRole::Statement;
        }

        auto base_point = [&]() {
            InjectionPoint p;
            p.rel_path = file.rel_path;
            p.subsystem = subsystem;
            p.site_begin = call.span.begin;
            p.site_end = call.span.end;
            p.callee = call.str_value;
            p.function = current_function;
            p.role = role;
            p.line = line_of(call.span.begin);
            return p;
        };

        // One wrong-value fault per corruptible argument. Literal nulls are
        // skipped: there is no corruption rule for null.
        for (size_t i = 0; i < call.items.size(); ++i) {
            if (call.items[i]->kind == lang::ExprKind::NullLit) {
                continue;
            }
            InjectionPoint p = base_point();
            p.bug_type = BugType::WrongParamValue;
            p.operand_index = static_cast<int>(i);
            p.operand_begin = call.items[i]->span.begin;
            p.operand_end = call.items[i]->span.end;
            p.id = mint_point_id(p);
            out.push_back(std::move(p));
        }

        // One dropped-argument fault per argument whose parameter declares a
        // default in the resolved callee signature.
        TargetTree::Callee callee;
        if (tree.resolve_callee(subsystem, call.str_value, callee)) {
            const size_t n = std::min(call.items.size(), callee.params.size());
            for (size_t i = 0; i < n; ++i) {
                if (!callee.params[i].has_default) {
                    continue;
                }
                InjectionPoint p = base_point();
                p.bug_type = BugType::MissingParam;
                p.operand_index = static_cast<int>(i);
                p.operand_begin = call.items[i]->span.begin;
                p.operand_end = call.items[i]->span.end;
                p.id = mint_point_id(p);
                out.push_back(std::move(p));
            }
        }

        {
            InjectionPoint p = base_point();
            p.bug_type = BugType::MissingFuncCall;
            p.id = mint_point_id(p);
            out.push_back(std::move(p));
        }

        if (role != CallRole::Statement) {
            InjectionPoint p = base_point();
            p.bug_type = BugType::WrongReturnValue;
            p.operand_index = 0;  // the single return slot
            p.operand_begin = call.span.begin;
            p.operand_end = call.span.end;
            p.id = mint_point_id(p);
            out.push_back(std::move(p));
        }
    }

    void flush_handler_points() {
        for (const auto& [try_stmt, target_call] : handler_targets) {
            InjectionPoint p;
            p.rel_path = file.rel_path;
            p.subsystem = subsystem;
            p.bug_type = BugType::MissingExcHandler;
            p.site_begin = try_stmt->span.begin;
            p.site_end = try_stmt->span.end;
            p.callee = target_call->str_value;
            p.function = function_of(try_stmt->span.begin);
            p.role = CallRole::Statement;
            p.line = line_of(try_stmt->span.begin);
            p.id = mint_point_id(p);
            out.push_back(std::move(p));
        }
    }

    int line_of(size_t offset) const {
        int line = 1;
        for (size_t i = 0; i < offset && i < file.source.size(); ++i) {
            if (file.source[i] == '\n') {
                ++line;
            }
        }
        return line;
    }

    std::string function_of(size_t offset) const {
        for (const auto& fn : file.functions) {
            if (offset >= fn.span.begin && offset < fn.span.end) {
                return fn.name;
            }
        }
        return "";
    }
};

}  // namespace

ScanResult scan_target(const TargetTree& tree, const ScanConfig& cfg) {
    ScanResult result;
    for (const auto& entry : tree.entries()) {
        Walker walker{cfg, tree, entry.subsystem, entry.file, result.points, {}, {}, {}, {}};
        walker.walk_file();
        walker.flush_handler_points();
        ++result.files_scanned;
    }
    std::sort(result.points.begin(), result.points.end(),
              [](const InjectionPoint& a, const InjectionPoint& b) {
                  if (a.rel_path != b.rel_path) {
                      return a.rel_path < b.rel_path;
                  }
                  if (a.site_begin != b.site_begin) {
                      return a.site_begin < b.site_begin;
                  }
                  if (bug_type_rank(a.bug_type) != bug_type_rank(b.bug_type)) {
                      return bug_type_rank(a.bug_type) < bug_type_rank(b.bug_type);
                  }
                  return a.operand_index < b.operand_index;
              });
    return result;
}

}  // namespace faultline::engine
