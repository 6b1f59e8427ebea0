#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace faultline::lang {

// Byte range into the original source text, [begin, end). All downstream
// source rewriting splices by these offsets, so they must stay exact.
struct Span {
    size_t begin = 0;
    size_t end = 0;
};

enum class TokenKind {
    Ident,
    Int,
    String,
    // keywords
    KwDef,
    KwIf,
    KwElif,
    KwElse,
    KwFor,
    KwIn,
    KwTry,
    KwCatch,
    KwAs,
    KwRaise,
    KwReturn,
    KwTrue,
    KwFalse,
    KwNull,
    KwAnd,
    KwOr,
    KwNot,
    // punctuation / operators
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semicolon,
    Assign,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Newline,
    EndOfFile,
};

struct Token {
    TokenKind kind;
    Span span;
    std::string text;      // identifier name or decoded string/int literal text
    int64_t int_value = 0;
    int line = 1;          // 1-based, for error messages
    int column = 1;
};

struct LexError {
    std::string message;
    int line = 1;
    int column = 1;
};

// Tokenizes a whole file. Newline tokens are emitted for every physical line
// break outside of string literals; the parser decides where they separate
// statements and where they are ignorable.
std::vector<Token> lex(const std::string& source, LexError* error);

const char* token_kind_name(TokenKind kind);

}  // namespace faultline::lang
