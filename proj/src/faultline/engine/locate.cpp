#include "faultline/engine/locate.hpp"

namespace faultline::engine {

namespace {

const lang::Expr* find_call_in_expr(const lang::Expr& expr, size_t begin, size_t end) {
    if (expr.kind == lang::ExprKind::Call && expr.span.begin == begin && expr.span.end == end) {
        return &expr;
    }
    for (const auto& item : expr.items) {
        if (const lang::Expr* hit = find_call_in_expr(*item, begin, end)) {
            return hit;
        }
    }
    if (expr.lhs) {
        if (const lang::Expr* hit = find_call_in_expr(*expr.lhs, begin, end)) {
            return hit;
        }
    }
    if (expr.rhs) {
        if (const lang::Expr* hit = find_call_in_expr(*expr.rhs, begin, end)) {
            return hit;
        }
    }
    return nullptr;
}

// Expressions attached directly to a statement (not the ones in nested
// blocks, which belong to inner statements).
void direct_exprs(const lang::Stmt& stmt, std::vector<const lang::Expr*>& out) {
    if (stmt.target) {
        out.push_back(stmt.target.get());
    }
    if (stmt.value) {
        out.push_back(stmt.value.get());
    }
    if (stmt.iterable) {
        out.push_back(stmt.iterable.get());
    }
    for (const auto& arm : stmt.arms) {
        if (arm.cond) {
            out.push_back(arm.cond.get());
        }
    }
}

LocatedCall search_block(const lang::Block& block, size_t begin, size_t end);

LocatedCall search_stmt(const lang::Stmt& stmt, size_t begin, size_t end) {
    if (begin < stmt.span.begin || end > stmt.span.end) {
        return {};
    }
    // Prefer an inner statement: its guard is the one that would wrap here.
    for (const auto& arm : stmt.arms) {
        LocatedCall hit = search_block(arm.block, begin, end);
        if (hit.call) {
            return hit;
        }
    }
    LocatedCall hit = search_block(stmt.body, begin, end);
    if (hit.call) {
        return hit;
    }
    hit = search_block(stmt.handler, begin, end);
    if (hit.call) {
        return hit;
    }
    std::vector<const lang::Expr*> exprs;
    direct_exprs(stmt, exprs);
    for (const lang::Expr* expr : exprs) {
        if (const lang::Expr* call = find_call_in_expr(*expr, begin, end)) {
            return {&stmt, call};
        }
    }
    return {};
}

LocatedCall search_block(const lang::Block& block, size_t begin, size_t end) {
    for (const auto& stmt : block.stmts) {
        LocatedCall hit = search_stmt(*stmt, begin, end);
        if (hit.call) {
            return hit;
        }
    }
    return {};
}

const lang::Stmt* search_try(const lang::Block& block, size_t begin, size_t end) {
    for (const auto& stmt : block.stmts) {
        if (stmt->kind == lang::StmtKind::Try && stmt->span.begin == begin &&
            stmt->span.end == end) {
            return stmt.get();
        }
        for (const auto& arm : stmt->arms) {
            if (const lang::Stmt* hit = search_try(arm.block, begin, end)) {
                return hit;
            }
        }
        if (const lang::Stmt* hit = search_try(stmt->body, begin, end)) {
            return hit;
        }
        if (const lang::Stmt* hit = search_try(stmt->handler, begin, end)) {
            return hit;
        }
    }
    return nullptr;
}

void collect_calls(const lang::Expr& expr, const std::string& name,
                   const lang::Expr*& best) {
    if (expr.kind == lang::ExprKind::Call && expr.str_value == name) {
        if (!best || expr.span.begin < best->span.begin) {
            best = &expr;
        }
    }
    for (const auto& item : expr.items) {
        collect_calls(*item, name, best);
    }
    if (expr.lhs) {
        collect_calls(*expr.lhs, name, best);
    }
    if (expr.rhs) {
        collect_calls(*expr.rhs, name, best);
    }
}

void collect_calls_block(const lang::Block& block, const std::string& name,
                         const lang::Expr*& best) {
    for (const auto& stmt : block.stmts) {
        std::vector<const lang::Expr*> exprs;
        direct_exprs(*stmt, exprs);
        for (const lang::Expr* expr : exprs) {
            collect_calls(*expr, name, best);
        }
        for (const auto& arm : stmt->arms) {
            collect_calls_block(arm.block, name, best);
        }
        collect_calls_block(stmt->body, name, best);
        collect_calls_block(stmt->handler, name, best);
    }
}

}  // namespace

LocatedCall locate_call(const lang::SourceFile& file, size_t begin, size_t end) {
    for (const auto& fn : file.functions) {
        LocatedCall hit = search_block(fn.body, begin, end);
        if (hit.call) {
            return hit;
        }
    }
    return {};
}

const lang::Stmt* locate_try(const lang::SourceFile& file, size_t begin, size_t end) {
    for (const auto& fn : file.functions) {
        if (const lang::Stmt* hit = search_try(fn.body, begin, end)) {
            return hit;
        }
    }
    return nullptr;
}

const lang::Expr* earliest_call_named(const lang::Block& block, const std::string& name) {
    const lang::Expr* best = nullptr;
    collect_calls_block(block, name, best);
    return best;
}

}  // namespace faultline::engine
