#include "faultline/lang/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace faultline::lang {

namespace {

const std::unordered_map<std::string, TokenKind>& keyword_table() {
    static const std::unordered_map<std::string, TokenKind> table = {
        {"def", TokenKind::KwDef},       {"if", TokenKind::KwIf},
        {"elif", TokenKind::KwElif},     {"else", TokenKind::KwElse},
        {"for", TokenKind::KwFor},       {"in", TokenKind::KwIn},
        {"try", TokenKind::KwTry},       {"catch", TokenKind::KwCatch},
        {"as", TokenKind::KwAs},         {"raise", TokenKind::KwRaise},
        {"return", TokenKind::KwReturn}, {"true", TokenKind::KwTrue},
        {"false", TokenKind::KwFalse},   {"null", TokenKind::KwNull},
        {"and", TokenKind::KwAnd},       {"or", TokenKind::KwOr},
        {"not", TokenKind::KwNot},
    };
    return table;
}

}  // namespace

std::vector<Token> lex(const std::string& src, LexError* error) {
    std::vector<Token> tokens;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    auto fail = [&](const std::string& message) {
        if (error) {
            *error = LexError{message, line, col};
        }
        tokens.clear();
        return tokens;
    };

    auto push = [&](TokenKind kind, size_t begin, size_t end, std::string text = "") {
        Token t;
        t.kind = kind;
        t.span = {begin, end};
        t.text = std::move(text);
        t.line = line;
        t.column = col - static_cast<int>(end - begin);
        tokens.push_back(std::move(t));
    };

    auto advance = [&](size_t n) {
        for (size_t i = 0; i < n; ++i) {
            if (pos < src.size() && src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    };

    while (pos < src.size()) {
        const char c = src[pos];
        const size_t begin = pos;

        if (c == '\n') {
            advance(1);
            push(TokenKind::Newline, begin, begin + 1);
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (pos < src.size() && src[pos] != '\n') {
                advance(1);
            }
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t end = pos;
            while (end < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_')) {
                ++end;
            }
            std::string word = src.substr(begin, end - begin);
            advance(end - begin);
            auto it = keyword_table().find(word);
            if (it != keyword_table().end()) {
                push(it->second, begin, end, word);
            } else {
                push(TokenKind::Ident, begin, end, std::move(word));
            }
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t end = pos;
            while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) {
                ++end;
            }
            std::string digits = src.substr(begin, end - begin);
            advance(end - begin);
            Token t;
            t.kind = TokenKind::Int;
            t.span = {begin, end};
            t.text = digits;
            try {
                t.int_value = std::stoll(digits);
            } catch (const std::exception&) {
                return fail("integer literal out of range: " + digits);
            }
            t.line = line;
            t.column = col - static_cast<int>(end - begin);
            tokens.push_back(std::move(t));
            continue;
        }
        if (c == '"') {
            std::string decoded;
            size_t scan = pos + 1;
            bool closed = false;
            while (scan < src.size()) {
                const char sc = src[scan];
                if (sc == '"') {
                    closed = true;
                    ++scan;
                    break;
                }
                if (sc == '\n') {
                    break;
                }
                if (sc == '\\') {
                    if (scan + 1 >= src.size()) {
                        break;
                    }
                    const char esc = src[scan + 1];
                    switch (esc) {
                        case 'n': decoded += '\n'; break;
                        case 't': decoded += '\t'; break;
                        case '"': decoded += '"'; break;
                        case '\\': decoded += '\\'; break;
                        default:
                            advance(scan - pos);
                            return fail(std::string("unknown escape sequence \\") + esc);
                    }
                    scan += 2;
                    continue;
                }
                decoded += sc;
                ++scan;
            }
            if (!closed) {
                return fail("unterminated string literal");
            }
            advance(scan - pos);
            push(TokenKind::String, begin, scan, std::move(decoded));
            continue;
        }

        auto two = [&](char a, char b) {
            return c == a && pos + 1 < src.size() && src[pos + 1] == b;
        };
        if (two('=', '=')) { advance(2); push(TokenKind::Eq, begin, begin + 2); continue; }
        if (two('!', '=')) { advance(2); push(TokenKind::Ne, begin, begin + 2); continue; }
        if (two('<', '=')) { advance(2); push(TokenKind::Le, begin, begin + 2); continue; }
        if (two('>', '=')) { advance(2); push(TokenKind::Ge, begin, begin + 2); continue; }

        TokenKind kind;
        switch (c) {
            case '(': kind = TokenKind::LParen; break;
            case ')': kind = TokenKind::RParen; break;
            case '{': kind = TokenKind::LBrace; break;
            case '}': kind = TokenKind::RBrace; break;
            case '[': kind = TokenKind::LBracket; break;
            case ']': kind = TokenKind::RBracket; break;
            case ',': kind = TokenKind::Comma; break;
            case ':': kind = TokenKind::Colon; break;
            case ';': kind = TokenKind::Semicolon; break;
            case '=': kind = TokenKind::Assign; break;
            case '<': kind = TokenKind::Lt; break;
            case '>': kind = TokenKind::Gt; break;
            case '+': kind = TokenKind::Plus; break;
            case '-': kind = TokenKind::Minus; break;
            case '*': kind = TokenKind::Star; break;
            case '/': kind = TokenKind::Slash; break;
            case '%': kind = TokenKind::Percent; break;
            default:
                return fail(std::string("unexpected character '") + c + "'");
        }
        advance(1);
        push(kind, begin, begin + 1);
    }

    Token eof;
    eof.kind = TokenKind::EndOfFile;
    eof.span = {src.size(), src.size()};
    eof.line = line;
    eof.column = col;
    tokens.push_back(std::move(eof));
    return tokens;
}

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Ident: return "identifier";
        case TokenKind::Int: return "integer";
        case TokenKind::String: return "string";
        case TokenKind::KwDef: return "'def'";
        case TokenKind::KwIf: return "'if'";
        case TokenKind::KwElif: return "'elif'";
        case TokenKind::KwElse: return "'else'";
        case TokenKind::KwFor: return "'for'";
        case TokenKind::KwIn: return "'in'";
        case TokenKind::KwTry: return "'try'";
        case TokenKind::KwCatch: return "'catch'";
        case TokenKind::KwAs: return "'as'";
        case TokenKind::KwRaise: return "'raise'";
        case TokenKind::KwReturn: return "'return'";
        case TokenKind::KwTrue: return "'true'";
        case TokenKind::KwFalse: return "'false'";
        case TokenKind::KwNull: return "'null'";
        case TokenKind::KwAnd: return "'and'";
        case TokenKind::KwOr: return "'or'";
        case TokenKind::KwNot: return "'not'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::Comma: return "','";
        case TokenKind::Colon: return "':'";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Assign: return "'='";
        case TokenKind::Eq: return "'=='";
        case TokenKind::Ne: return "'!='";
        case TokenKind::Lt: return "'<'";
        case TokenKind::Le: return "'<='";
        case TokenKind::Gt: return "'>'";
        case TokenKind::Ge: return "'>='";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::Percent: return "'%'";
        case TokenKind::Newline: return "newline";
        case TokenKind::EndOfFile: return "end of file";
    }
    return "?";
}

}  // namespace faultline::lang
