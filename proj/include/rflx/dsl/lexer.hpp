// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rflx/dsl/ast.hpp"
#include "rflx/expr.hpp"

namespace rflx::dsl {

enum class TokenKind : std::uint8_t {
    Identifier,
    Number,
    KwPackage,
    KwIs,
    KwEnd,
    KwType,
    KwMod,
    KwRange,
    KwWith,
    KwMessage,
    KwThen,
    KwNull,
    KwIf,
    KwNew,
    KwAnd,
    KwOr,
    KwNot,
    Arrow,       // =>
    Equal,       // =
    NotEqual,    // /=
    LessEqual,   // <=
    GreaterEqual,// >=
    Less,
    Greater,
    Plus,
    Minus,
    Star,
    Slash,
    StarStar,    // **
    Dot,
    DotDot,
    Comma,
    Semicolon,
    Colon,
    LParen,
    RParen,
    Tick,        // '
    EndOfInput,
};

inline const char* token_name(TokenKind k) {
    switch (k) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::KwPackage: return "'package'";
    case TokenKind::KwIs: return "'is'";
    case TokenKind::KwEnd: return "'end'";
    case TokenKind::KwType: return "'type'";
    case TokenKind::KwMod: return "'mod'";
    case TokenKind::KwRange: return "'range'";
    case TokenKind::KwWith: return "'with'";
    case TokenKind::KwMessage: return "'message'";
    case TokenKind::KwThen: return "'then'";
    case TokenKind::KwNull: return "'null'";
    case TokenKind::KwIf: return "'if'";
    case TokenKind::KwNew: return "'new'";
    case TokenKind::KwAnd: return "'and'";
    case TokenKind::KwOr: return "'or'";
    case TokenKind::KwNot: return "'not'";
    case TokenKind::Arrow: return "'=>'";
    case TokenKind::Equal: return "'='";
    case TokenKind::NotEqual: return "'/='";
    case TokenKind::LessEqual: return "'<='";
    case TokenKind::GreaterEqual: return "'>='";
    case TokenKind::Less: return "'<'";
    case TokenKind::Greater: return "'>'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::StarStar: return "'**'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::DotDot: return "'..'";
    case TokenKind::Comma: return "','";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Colon: return "':'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Tick: return "'''";
    default: return "end of input";
    }
}

struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    std::string text;          // identifier spelling as written
    std::uint64_t number = 0;  // value for Number tokens
    SourceLoc loc;
};

/// Tokenizes specification text. Keywords are case-insensitive; identifier
/// spellings are preserved. Comments run from `--` to end of line. Numeric
/// literals are decimal or based (`16#8100#`, base 2..16).
inline std::variant<std::vector<Token>, SyntaxError> lex(std::string_view text) {
    static const std::map<std::string, TokenKind, std::less<>> keywords = {
        {"package", TokenKind::KwPackage}, {"is", TokenKind::KwIs},
        {"end", TokenKind::KwEnd},         {"type", TokenKind::KwType},
        {"mod", TokenKind::KwMod},         {"range", TokenKind::KwRange},
        {"with", TokenKind::KwWith},       {"message", TokenKind::KwMessage},
        {"then", TokenKind::KwThen},       {"null", TokenKind::KwNull},
        {"if", TokenKind::KwIf},           {"new", TokenKind::KwNew},
        {"and", TokenKind::KwAnd},         {"or", TokenKind::KwOr},
        {"not", TokenKind::KwNot},
    };

    std::vector<Token> tokens;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    auto loc_here = [&] { return SourceLoc{line, column}; };
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    auto push = [&](TokenKind k, SourceLoc loc, std::string t = {}) {
        tokens.push_back(Token{k, std::move(t), 0, loc});
    };
    auto is_ident_start = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    };
    auto is_ident_char = [&](char c) {
        return is_ident_start(c) || (c >= '0' && c <= '9') || c == '_';
    };
    auto digit_value = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
            while (i < text.size() && text[i] != '\n')
                advance();
            continue;
        }
        SourceLoc loc = loc_here();
        if (is_ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && is_ident_char(text[i]))
                advance();
            std::string word(text.substr(start, i - start));
            auto kw = keywords.find(ascii_lower(word));
            if (kw != keywords.end())
                push(kw->second, loc, std::move(word));
            else
                push(TokenKind::Identifier, loc, std::move(word));
            continue;
        }
        if (c >= '0' && c <= '9') {
            std::uint64_t value = 0;
            std::size_t start = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
                auto m = num::checked_mul(value, 10);
                std::optional<std::uint64_t> a =
                    m ? num::checked_add(*m, static_cast<std::uint64_t>(text[i] - '0'))
                      : std::nullopt;
                if (!a)
                    return SyntaxError{loc, "numeric literal does not fit in 64 bits", {}};
                value = *a;
                advance();
            }
            if (i < text.size() && text[i] == '#') {
                std::uint64_t base = value;
                if (base < 2 || base > 16)
                    return SyntaxError{loc, "literal base must be between 2 and 16", {}};
                advance();  // '#'
                value = 0;
                bool any = false;
                while (i < text.size() && text[i] != '#') {
                    int d = digit_value(text[i]);
                    if (d < 0 || static_cast<std::uint64_t>(d) >= base)
                        return SyntaxError{loc_here(), "invalid digit in based literal", {}};
                    auto m = num::checked_mul(value, base);
                    std::optional<std::uint64_t> a =
                        m ? num::checked_add(*m, static_cast<std::uint64_t>(d)) : std::nullopt;
                    if (!a)
                        return SyntaxError{loc, "numeric literal does not fit in 64 bits", {}};
                    value = *a;
                    any = true;
                    advance();
                }
                if (i >= text.size() || !any)
                    return SyntaxError{loc, "unterminated based literal", {}};
                advance();  // closing '#'
            }
            Token t;
            t.kind = TokenKind::Number;
            t.text = std::string(text.substr(start, i - start));
            t.number = value;
            t.loc = loc;
            tokens.push_back(std::move(t));
            continue;
        }
        switch (c) {
        case '=':
            if (i + 1 < text.size() && text[i + 1] == '>') {
                push(TokenKind::Arrow, loc);
                advance(2);
            } else {
                push(TokenKind::Equal, loc);
                advance();
            }
            continue;
        case '/':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                push(TokenKind::NotEqual, loc);
                advance(2);
            } else {
                push(TokenKind::Slash, loc);
                advance();
            }
            continue;
        case '<':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                push(TokenKind::LessEqual, loc);
                advance(2);
            } else {
                push(TokenKind::Less, loc);
                advance();
            }
            continue;
        case '>':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                push(TokenKind::GreaterEqual, loc);
                advance(2);
            } else {
                push(TokenKind::Greater, loc);
                advance();
            }
            continue;
        case '*':
            if (i + 1 < text.size() && text[i + 1] == '*') {
                push(TokenKind::StarStar, loc);
                advance(2);
            } else {
                push(TokenKind::Star, loc);
                advance();
            }
            continue;
        case '.':
            if (i + 1 < text.size() && text[i + 1] == '.') {
                push(TokenKind::DotDot, loc);
                advance(2);
            } else {
                push(TokenKind::Dot, loc);
                advance();
            }
            continue;
        case '+': push(TokenKind::Plus, loc); advance(); continue;
        case '-': push(TokenKind::Minus, loc); advance(); continue;
        case ',': push(TokenKind::Comma, loc); advance(); continue;
        case ';': push(TokenKind::Semicolon, loc); advance(); continue;
        case ':': push(TokenKind::Colon, loc); advance(); continue;
        case '(': push(TokenKind::LParen, loc); advance(); continue;
        case ')': push(TokenKind::RParen, loc); advance(); continue;
        case '\'': push(TokenKind::Tick, loc); advance(); continue;
        default:
            return SyntaxError{loc, std::string("unexpected character '") + c + "'", {}};
        }
    }
    Token eof;
    eof.loc = loc_here();
    tokens.push_back(std::move(eof));
    return tokens;
}

}  // namespace rflx::dsl
