#pragma once

#include "faultline/lang/lexer.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace faultline::lang {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;
struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

enum class ExprKind {
    NullLit,
    BoolLit,
    IntLit,
    StrLit,
    Ident,
    ListLit,
    MapLit,
    Call,
    Index,
    Unary,
    Binary,
};

enum class BinOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, Mod };
enum class UnOp { Neg, Not };

struct Expr {
    ExprKind kind;
    Span span;

    bool bool_value = false;
    int64_t int_value = 0;
    std::string str_value;          // string literal; identifier / callee name

    std::vector<ExprPtr> items;     // list elements, map values, call arguments
    std::vector<std::string> keys;  // map keys, parallel to items

    ExprPtr lhs;                    // binary lhs, index base, unary operand
    ExprPtr rhs;                    // binary rhs, index subscript
    BinOp bin_op = BinOp::Or;
    UnOp un_op = UnOp::Neg;

    Span name_span;                 // Call only: span of the callee name
};

struct Block {
    std::vector<StmtPtr> stmts;
    Span span;        // including braces
    Span inner_span;  // between the braces
};

enum class StmtKind { Assign, ExprStmt, If, For, Try, Raise, Return };

struct IfArm {
    ExprPtr cond;     // null for the trailing else
    Block block;
};

struct Stmt {
    StmtKind kind;
    Span span;

    ExprPtr target;            // Assign: Ident or Index chain
    ExprPtr value;             // Assign value / ExprStmt expr / Return expr / Raise message (nullable)
    std::string name;          // For: loop variable; Raise: error type name
    ExprPtr iterable;          // For
    Block body;                // For / Try body
    std::vector<IfArm> arms;   // If

    std::string catch_type;    // Try: empty means catch-all
    std::string catch_var;     // Try: empty means unbound
    Block handler;             // Try
};

struct Param {
    std::string name;
    bool has_default = false;
    nlohmann::json default_value;
    Span default_span;  // literal text, valid when has_default
};

struct FnDef {
    std::string name;
    Span name_span;
    std::vector<Param> params;
    Block body;
    Span span;
};

// One parsed source file. `source` is retained because every rewrite and
// error message works on byte offsets into it.
struct SourceFile {
    std::string rel_path;   // forward-slash path relative to the target root
    std::string source;
    std::vector<FnDef> functions;
};

}  // namespace faultline::lang
