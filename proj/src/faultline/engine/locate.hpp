#pragma once

#include "faultline/lang/ast.hpp"

namespace faultline::engine {

// Re-finds AST structures by byte span inside a freshly parsed file. Used by
// the rewriting passes so a stale point catalog produces a clean typed error
// instead of a bad splice.
struct LocatedCall {
    const lang::Stmt* stmt = nullptr;  // innermost statement enclosing the call
    const lang::Expr* call = nullptr;
};

// Call with exactly the given span, plus its innermost enclosing statement.
LocatedCall locate_call(const lang::SourceFile& file, size_t begin, size_t end);

// Try statement with exactly the given span.
const lang::Stmt* locate_try(const lang::SourceFile& file, size_t begin, size_t end);

// Earliest call inside an expression tree with the given callee name.
const lang::Expr* earliest_call_named(const lang::Block& block, const std::string& name);

}  // namespace faultline::engine
