#include "faultline/lang/parser.hpp"

#include <cassert>

namespace faultline::lang {

namespace {

class Parser {
public:
    Parser(const std::string& source, std::vector<Token> tokens)
        : source_(source), tokens_(std::move(tokens)) {}

    std::optional<SourceFile> run(ParseError& error) {
        try {
            SourceFile file;
            file.source = source_;
            skip_separators();
            while (!at(TokenKind::EndOfFile)) {
                file.functions.push_back(parse_fndef());
                skip_separators();
            }
            return file;
        } catch (const ParseError& err) {
            error = err;
            return std::nullopt;
        }
    }

private:
    const std::string& source_;
    std::vector<Token> tokens_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) {
        const Token& t = peek();
        throw ParseError{message, t.line, t.column, t.span.begin};
    }

    const Token& peek(size_t ahead = 0) const {
        const size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    bool at(TokenKind kind) const { return peek().kind == kind; }

    const Token& advance() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) {
            ++pos_;
        }
        return t;
    }

    const Token& expect(TokenKind kind, const std::string& context) {
        if (!at(kind)) {
            fail("expected " + std::string(token_kind_name(kind)) + " " + context + ", found " +
                 token_kind_name(peek().kind));
        }
        return advance();
    }

    void skip_newlines() {
        while (at(TokenKind::Newline)) {
            advance();
        }
    }

    void skip_separators() {
        while (at(TokenKind::Newline) || at(TokenKind::Semicolon)) {
            advance();
        }
    }

    // Peeks past newlines for block-chaining keywords (elif/else/catch).
    // Consumes the newlines only when the keyword is actually there.
    bool take_chained(TokenKind kind) {
        size_t i = pos_;
        while (i < tokens_.size() && tokens_[i].kind == TokenKind::Newline) {
            ++i;
        }
        if (i < tokens_.size() && tokens_[i].kind == kind) {
            pos_ = i + 1;
            return true;
        }
        return false;
    }

    void expect_statement_end() {
        switch (peek().kind) {
            case TokenKind::Newline:
            case TokenKind::Semicolon:
                advance();
                return;
            case TokenKind::RBrace:
            case TokenKind::EndOfFile:
                return;
            default:
                fail("expected end of statement, found " +
                     std::string(token_kind_name(peek().kind)));
        }
    }

    FnDef parse_fndef() {
        const Token& kw = expect(TokenKind::KwDef, "to start a function definition");
        FnDef fn;
        fn.span.begin = kw.span.begin;
        const Token& name = expect(TokenKind::Ident, "as the function name");
        fn.name = name.text;
        fn.name_span = name.span;
        expect(TokenKind::LParen, "after the function name");
        skip_newlines();
        bool saw_default = false;
        while (!at(TokenKind::RParen)) {
            Param param;
            param.name = expect(TokenKind::Ident, "as a parameter name").text;
            if (at(TokenKind::Assign)) {
                advance();
                param.has_default = true;
                parse_default_literal(param);
                saw_default = true;
            } else if (saw_default) {
                fail("parameter '" + param.name + "' without default follows a defaulted one");
            }
            fn.params.push_back(std::move(param));
            skip_newlines();
            if (at(TokenKind::Comma)) {
                advance();
                skip_newlines();
            } else {
                break;
            }
        }
        expect(TokenKind::RParen, "to close the parameter list");
        fn.body = parse_block();
        fn.span.end = fn.body.span.end;
        return fn;
    }

    // Defaults are restricted to literals so they can be evaluated without an
    // environment and spliced as plain text: scalars plus empty [] / {}.
    void parse_default_literal(Param& param) {
        const Token& t = peek();
        param.default_span.begin = t.span.begin;
        switch (t.kind) {
            case TokenKind::KwNull:
                param.default_value = nullptr;
                advance();
                break;
            case TokenKind::KwTrue:
                param.default_value = true;
                advance();
                break;
            case TokenKind::KwFalse:
                param.default_value = false;
                advance();
                break;
            case TokenKind::Int:
                param.default_value = t.int_value;
                advance();
                break;
            case TokenKind::Minus: {
                advance();
                const Token& num = expect(TokenKind::Int, "after '-' in a default value");
                param.default_value = -num.int_value;
                break;
            }
            case TokenKind::String:
                param.default_value = t.text;
                advance();
                break;
            case TokenKind::LBracket:
                advance();
                expect(TokenKind::RBracket, "(only an empty list is allowed as a default)");
                param.default_value = nlohmann::json::array();
                break;
            case TokenKind::LBrace:
                advance();
                expect(TokenKind::RBrace, "(only an empty map is allowed as a default)");
                param.default_value = nlohmann::json::object();
                break;
            default:
                fail("default values must be literals");
        }
        param.default_span.end = tokens_[pos_ - 1].span.end;
    }

    Block parse_block() {
        skip_newlines();
        const Token& open = expect(TokenKind::LBrace, "to open a block");
        Block block;
        block.span.begin = open.span.begin;
        block.inner_span.begin = open.span.end;
        skip_separators();
        while (!at(TokenKind::RBrace)) {
            if (at(TokenKind::EndOfFile)) {
                fail("unterminated block");
            }
            block.stmts.push_back(std::make_unique<Stmt>(parse_statement()));
            skip_separators();
        }
        const Token& close = advance();
        block.inner_span.end = close.span.begin;
        block.span.end = close.span.end;
        return block;
    }

    Stmt parse_statement() {
        switch (peek().kind) {
            case TokenKind::KwIf: return parse_if();
            case TokenKind::KwFor: return parse_for();
            case TokenKind::KwTry: return parse_try();
            case TokenKind::KwRaise: return parse_raise();
            case TokenKind::KwReturn: return parse_return();
            default: return parse_assign_or_expr();
        }
    }

    Stmt parse_if() {
        Stmt stmt;
        stmt.kind = StmtKind::If;
        stmt.span.begin = peek().span.begin;
        advance();
        IfArm first;
        first.cond = parse_expr();
        first.block = parse_block();
        stmt.span.end = first.block.span.end;
        stmt.arms.push_back(std::move(first));
        while (take_chained(TokenKind::KwElif)) {
            IfArm arm;
            arm.cond = parse_expr();
            arm.block = parse_block();
            stmt.span.end = arm.block.span.end;
            stmt.arms.push_back(std::move(arm));
        }
        if (take_chained(TokenKind::KwElse)) {
            IfArm arm;
            arm.block = parse_block();
            stmt.span.end = arm.block.span.end;
            stmt.arms.push_back(std::move(arm));
        }
        expect_statement_end();
        return stmt;
    }

    Stmt parse_for() {
        Stmt stmt;
        stmt.kind = StmtKind::For;
        stmt.span.begin = peek().span.begin;
        advance();
        stmt.name = expect(TokenKind::Ident, "as the loop variable").text;
        expect(TokenKind::KwIn, "after the loop variable");
        stmt.iterable = parse_expr();
        stmt.body = parse_block();
        stmt.span.end = stmt.body.span.end;
        expect_statement_end();
        return stmt;
    }

    Stmt parse_try() {
        Stmt stmt;
        stmt.kind = StmtKind::Try;
        stmt.span.begin = peek().span.begin;
        advance();
        stmt.body = parse_block();
        if (!take_chained(TokenKind::KwCatch)) {
            fail("'try' block must be followed by 'catch'");
        }
        if (at(TokenKind::Ident)) {
            stmt.catch_type = advance().text;
        }
        if (at(TokenKind::KwAs)) {
            advance();
            stmt.catch_var = expect(TokenKind::Ident, "after 'as'").text;
        }
        stmt.handler = parse_block();
        stmt.span.end = stmt.handler.span.end;
        expect_statement_end();
        return stmt;
    }

    Stmt parse_raise() {
        Stmt stmt;
        stmt.kind = StmtKind::Raise;
        stmt.span.begin = peek().span.begin;
        advance();
        const Token& type = expect(TokenKind::Ident, "as the error type");
        stmt.name = type.text;
        expect(TokenKind::LParen, "after the error type");
        skip_newlines();
        if (!at(TokenKind::RParen)) {
            stmt.value = parse_expr();
            skip_newlines();
        }
        const Token& close = expect(TokenKind::RParen, "to close the raise expression");
        stmt.span.end = close.span.end;
        expect_statement_end();
        return stmt;
    }

    Stmt parse_return() {
        Stmt stmt;
        stmt.kind = StmtKind::Return;
        const Token& kw = advance();
        stmt.span = kw.span;
        if (!at(TokenKind::Newline) && !at(TokenKind::Semicolon) && !at(TokenKind::RBrace) &&
            !at(TokenKind::EndOfFile)) {
            stmt.value = parse_expr();
            stmt.span.end = stmt.value->span.end;
        }
        expect_statement_end();
        return stmt;
    }

    Stmt parse_assign_or_expr() {
        ExprPtr first = parse_expr();
        Stmt stmt;
        stmt.span = first->span;
        if (at(TokenKind::Assign)) {
            if (first->kind != ExprKind::Ident && first->kind != ExprKind::Index) {
                fail("left side of '=' must be a name or an indexed element");
            }
            advance();
            stmt.kind = StmtKind::Assign;
            stmt.target = std::move(first);
            stmt.value = parse_expr();
            stmt.span.end = stmt.value->span.end;
        } else {
            stmt.kind = StmtKind::ExprStmt;
            stmt.value = std::move(first);
        }
        expect_statement_end();
        return stmt;
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Binary;
        e->bin_op = op;
        e->span = {lhs->span.begin, rhs->span.end};
        e->lhs = std::move(lhs);
        e->rhs = std::move(rhs);
        return e;
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (at(TokenKind::KwOr)) {
            advance();
            lhs = make_binary(BinOp::Or, std::move(lhs), parse_and());
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_not();
        while (at(TokenKind::KwAnd)) {
            advance();
            lhs = make_binary(BinOp::And, std::move(lhs), parse_not());
        }
        return lhs;
    }

    ExprPtr parse_not() {
        if (at(TokenKind::KwNot)) {
            const Token& kw = advance();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Unary;
            e->un_op = UnOp::Not;
            e->lhs = parse_not();
            e->span = {kw.span.begin, e->lhs->span.end};
            return e;
        }
        return parse_comparison();
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_additive();
        BinOp op;
        switch (peek().kind) {
            case TokenKind::Eq: op = BinOp::Eq; break;
            case TokenKind::Ne: op = BinOp::Ne; break;
            case TokenKind::Lt: op = BinOp::Lt; break;
            case TokenKind::Le: op = BinOp::Le; break;
            case TokenKind::Gt: op = BinOp::Gt; break;
            case TokenKind::Ge: op = BinOp::Ge; break;
            default: return lhs;
        }
        advance();
        return make_binary(op, std::move(lhs), parse_additive());
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
            const BinOp op = at(TokenKind::Plus) ? BinOp::Add : BinOp::Sub;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_multiplicative());
        }
        return lhs;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        while (at(TokenKind::Star) || at(TokenKind::Slash) || at(TokenKind::Percent)) {
            BinOp op = BinOp::Mul;
            if (at(TokenKind::Slash)) {
                op = BinOp::Div;
            } else if (at(TokenKind::Percent)) {
                op = BinOp::Mod;
            }
            advance();
            lhs = make_binary(op, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at(TokenKind::Minus)) {
            const Token& kw = advance();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Unary;
            e->un_op = UnOp::Neg;
            e->lhs = parse_unary();
            e->span = {kw.span.begin, e->lhs->span.end};
            return e;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr base = parse_primary();
        // Direct calls only: a '(' binds when the base is a plain identifier.
        if (base->kind == ExprKind::Ident && at(TokenKind::LParen)) {
            auto call = std::make_unique<Expr>();
            call->kind = ExprKind::Call;
            call->str_value = base->str_value;
            call->name_span = base->span;
            call->span.begin = base->span.begin;
            advance();
            skip_newlines();
            while (!at(TokenKind::RParen)) {
                call->items.push_back(parse_expr());
                skip_newlines();
                if (at(TokenKind::Comma)) {
                    advance();
                    skip_newlines();
                } else {
                    break;
                }
            }
            const Token& close = expect(TokenKind::RParen, "to close the argument list");
            call->span.end = close.span.end;
            base = std::move(call);
        }
        while (at(TokenKind::LBracket)) {
            advance();
            skip_newlines();
            auto index = std::make_unique<Expr>();
            index->kind = ExprKind::Index;
            index->rhs = parse_expr();
            skip_newlines();
            const Token& close = expect(TokenKind::RBracket, "to close the subscript");
            index->span = {base->span.begin, close.span.end};
            index->lhs = std::move(base);
            base = std::move(index);
        }
        return base;
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        auto lit = [&](ExprKind kind) {
            auto e = std::make_unique<Expr>();
            e->kind = kind;
            e->span = t.span;
            return e;
        };
        switch (t.kind) {
            case TokenKind::KwNull:
                advance();
                return lit(ExprKind::NullLit);
            case TokenKind::KwTrue:
            case TokenKind::KwFalse: {
                auto e = lit(ExprKind::BoolLit);
                e->bool_value = t.kind == TokenKind::KwTrue;
                advance();
                return e;
            }
            case TokenKind::Int: {
                auto e = lit(ExprKind::IntLit);
                e->int_value = t.int_value;
                advance();
                return e;
            }
            case TokenKind::String: {
                auto e = lit(ExprKind::StrLit);
                e->str_value = t.text;
                advance();
                return e;
            }
            case TokenKind::Ident: {
                auto e = lit(ExprKind::Ident);
                e->str_value = t.text;
                advance();
                return e;
            }
            case TokenKind::LParen: {
                advance();
                skip_newlines();
                ExprPtr inner = parse_expr();
                skip_newlines();
                expect(TokenKind::RParen, "to close the parenthesized expression");
                return inner;
            }
            case TokenKind::LBracket: {
                auto e = lit(ExprKind::ListLit);
                advance();
                skip_newlines();
                while (!at(TokenKind::RBracket)) {
                    e->items.push_back(parse_expr());
                    skip_newlines();
                    if (at(TokenKind::Comma)) {
                        advance();
                        skip_newlines();
                    } else {
                        break;
                    }
                }
                const Token& close = expect(TokenKind::RBracket, "to close the list literal");
                e->span.end = close.span.end;
                return e;
            }
            case TokenKind::LBrace: {
                auto e = lit(ExprKind::MapLit);
                advance();
                skip_newlines();
                while (!at(TokenKind::RBrace)) {
                    const Token& key = expect(TokenKind::String, "as a map key");
                    e->keys.push_back(key.text);
                    skip_newlines();
                    expect(TokenKind::Colon, "after the map key");
                    skip_newlines();
                    e->items.push_back(parse_expr());
                    skip_newlines();
                    if (at(TokenKind::Comma)) {
                        advance();
                        skip_newlines();
                    } else {
                        break;
                    }
                }
                const Token& close = expect(TokenKind::RBrace, "to close the map literal");
                e->span.end = close.span.end;
                return e;
            }
            default:
                fail("expected an expression, found " + std::string(token_kind_name(t.kind)));
        }
    }
};

}  // namespace

std::optional<SourceFile> parse_source(const std::string& source, ParseError& error) {
    LexError lex_error;
    lex_error.message.clear();
    std::vector<Token> tokens = lex(source, &lex_error);
    if (tokens.empty()) {
        error = ParseError{lex_error.message, lex_error.line, lex_error.column, 0};
        return std::nullopt;
    }
    Parser parser(source, std::move(tokens));
    return parser.run(error);
}

}  // namespace faultline::lang
