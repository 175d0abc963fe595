// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rflx/dsl/ast.hpp"
#include "rflx/dsl/lexer.hpp"
#include "rflx/expr.hpp"

namespace rflx::dsl {

namespace detail {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::variant<SpecFile, std::vector<SyntaxError>> run() {
        SpecFile spec;
        try {
            expect(TokenKind::KwPackage);
            spec.package_name = expect(TokenKind::Identifier).text;
            expect(TokenKind::KwIs);
            while (!at(TokenKind::KwEnd) && !at(TokenKind::EndOfInput)) {
                std::size_t before = pos_;
                try {
                    spec.declarations.push_back(parse_declaration());
                } catch (const Abort&) {
                    synchronize(before);
                    if (errors_.size() >= 20)
                        break;
                }
            }
            expect(TokenKind::KwEnd);
            Token closing = expect(TokenKind::Identifier);
            if (ascii_lower(closing.text) != ascii_lower(spec.package_name))
                error(closing.loc,
                      "package closed as '" + closing.text + "' but opened as '" +
                          spec.package_name + "'",
                      {});
            expect(TokenKind::Semicolon);
            if (!at(TokenKind::EndOfInput))
                error(cur().loc, "trailing input after package", {});
        } catch (const Abort&) {
            // structural failure: diagnostics already recorded
        }
        if (!errors_.empty())
            return errors_;
        return spec;
    }

private:
    struct Abort {};

    const Token& cur() const { return tokens_[pos_]; }
    const Token& peek(std::size_t ahead) const {
        std::size_t i = pos_ + ahead;
        return tokens_[i < tokens_.size() ? i : tokens_.size() - 1];
    }
    bool at(TokenKind k) const { return cur().kind == k; }
    void next() {
        if (pos_ + 1 < tokens_.size())
            ++pos_;
    }

    [[noreturn]] void fail(SourceLoc loc, std::string message, std::vector<std::string> expected) {
        error(loc, std::move(message), std::move(expected));
        throw Abort{};
    }
    void error(SourceLoc loc, std::string message, std::vector<std::string> expected) {
        errors_.push_back(SyntaxError{loc, std::move(message), std::move(expected)});
    }

    Token expect(TokenKind k) {
        if (!at(k))
            fail(cur().loc,
                 std::string("expected ") + token_name(k) + ", found " + describe(cur()),
                 {token_name(k)});
        Token t = cur();
        next();
        return t;
    }

    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Number)
            return "'" + t.text + "'";
        return token_name(t.kind);
    }

    /// Skips ahead to a plausible declaration boundary after a syntax error.
    void synchronize(std::size_t error_pos) {
        if (pos_ == error_pos)
            next();
        while (!at(TokenKind::EndOfInput)) {
            if (at(TokenKind::KwType))
                return;
            if (at(TokenKind::KwEnd) && peek(1).kind != TokenKind::KwMessage)
                return;
            if (at(TokenKind::Semicolon) &&
                (peek(1).kind == TokenKind::KwType || peek(1).kind == TokenKind::KwEnd)) {
                next();
                return;
            }
            next();
        }
    }

    // -- declarations -------------------------------------------------------

    Declaration parse_declaration() {
        Token kw = expect(TokenKind::KwType);
        Token name = expect(TokenKind::Identifier);
        expect(TokenKind::KwIs);
        Declaration decl = [&]() -> Declaration {
            switch (cur().kind) {
            case TokenKind::KwMod:
                return parse_modular(name, kw.loc);
            case TokenKind::KwRange:
                return parse_range(name, kw.loc);
            case TokenKind::LParen:
                return parse_enumeration(name, kw.loc);
            case TokenKind::KwMessage:
                return parse_message(name, kw.loc);
            case TokenKind::KwNew:
                return parse_refinement(name, kw.loc);
            default:
                fail(cur().loc,
                     "expected a type definition ('mod', 'range', '(', 'message' or 'new'), "
                     "found " +
                         describe(cur()),
                     {"'mod'", "'range'", "'('", "'message'", "'new'"});
            }
        }();
        expect(TokenKind::Semicolon);
        return decl;
    }

    std::uint64_t constant_expression() {
        SourceLoc loc = cur().loc;
        Expr e = fold(parse_expression());
        if (!e.valid() || e.kind() != Expr::Kind::Constant)
            fail(loc, "constant expression expected", {});
        return e.value();
    }

    ScalarTypeDecl parse_modular(const Token& name, SourceLoc loc) {
        expect(TokenKind::KwMod);
        std::uint64_t modulus = constant_expression();
        return ScalarTypeDecl{name.text, ModularType{modulus}, loc};
    }

    ScalarTypeDecl parse_range(const Token& name, SourceLoc loc) {
        expect(TokenKind::KwRange);
        std::uint64_t lower = constant_expression();
        expect(TokenKind::DotDot);
        std::uint64_t upper = constant_expression();
        std::uint64_t size = size_aspect();
        return ScalarTypeDecl{name.text, RangeType{lower, upper, static_cast<std::uint32_t>(size)},
                              loc};
    }

    ScalarTypeDecl parse_enumeration(const Token& name, SourceLoc loc) {
        expect(TokenKind::LParen);
        EnumType e;
        while (true) {
            Token lit = expect(TokenKind::Identifier);
            expect(TokenKind::Arrow);
            e.literals.emplace_back(lit.text, constant_expression());
            if (at(TokenKind::Comma)) {
                next();
                continue;
            }
            break;
        }
        expect(TokenKind::RParen);
        e.size_bits = static_cast<std::uint32_t>(size_aspect());
        return ScalarTypeDecl{name.text, std::move(e), loc};
    }

    std::uint64_t size_aspect() {
        expect(TokenKind::KwWith);
        Token aspect = expect(TokenKind::Identifier);
        if (ascii_lower(aspect.text) != "size")
            fail(aspect.loc, "expected 'Size' aspect, found '" + aspect.text + "'", {"Size"});
        if (at(TokenKind::Arrow) || at(TokenKind::Equal))
            next();
        else
            fail(cur().loc, "expected '=>' after 'Size', found " + describe(cur()),
                 {"'=>'", "'='"});
        return constant_expression();
    }

    MessageDecl parse_message(const Token& name, SourceLoc loc) {
        expect(TokenKind::KwMessage);
        MessageDecl decl{name.text, {}, loc};
        while (!at(TokenKind::KwEnd)) {
            if (at(TokenKind::EndOfInput))
                fail(cur().loc, "unterminated message type", {"'end message'"});
            decl.components.push_back(parse_component());
        }
        expect(TokenKind::KwEnd);
        expect(TokenKind::KwMessage);
        if (decl.components.empty())
            fail(loc, "message type must declare at least one component", {});
        return decl;
    }

    Component parse_component() {
        Token name = expect(TokenKind::Identifier);
        expect(TokenKind::Colon);
        Token type_name = expect(TokenKind::Identifier);
        Component comp{name.text, type_name.text, {}, name.loc};
        while (at(TokenKind::KwThen)) {
            comp.then_clauses.push_back(parse_then_clause());
            if (at(TokenKind::Comma) && peek(1).kind == TokenKind::KwThen) {
                next();
                continue;
            }
            break;
        }
        expect(TokenKind::Semicolon);
        return comp;
    }

    ThenClause parse_then_clause() {
        Token then_kw = expect(TokenKind::KwThen);
        ThenClause clause;
        clause.loc = then_kw.loc;
        if (at(TokenKind::KwNull)) {
            next();
        } else {
            clause.target = expect(TokenKind::Identifier).text;
        }
        if (at(TokenKind::KwWith)) {
            next();
            while (true) {
                Token aspect = expect(TokenKind::Identifier);
                std::string key = ascii_lower(aspect.text);
                if (key != "length" && key != "first")
                    fail(aspect.loc,
                         "unknown aspect '" + aspect.text + "' (expected 'Length' or 'First')",
                         {"Length", "First"});
                if (at(TokenKind::Arrow) || at(TokenKind::Equal))
                    next();
                else
                    fail(cur().loc, "expected '=>' after aspect name, found " + describe(cur()),
                         {"'=>'", "'='"});
                Expr value = parse_expression();
                if (key == "length") {
                    if (clause.length)
                        fail(aspect.loc, "duplicate 'Length' aspect", {});
                    clause.length = value;
                } else {
                    if (clause.first)
                        fail(aspect.loc, "duplicate 'First' aspect", {});
                    clause.first = value;
                }
                if (at(TokenKind::Comma) && peek(1).kind != TokenKind::KwThen) {
                    next();
                    continue;
                }
                break;
            }
        }
        if (at(TokenKind::KwIf)) {
            next();
            clause.condition = parse_expression();
        }
        return clause;
    }

    RefinementDecl parse_refinement(const Token& name, SourceLoc loc) {
        expect(TokenKind::KwNew);
        RefinementDecl decl;
        decl.name = name.text;
        decl.loc = loc;
        decl.outer = qualified_name();
        expect(TokenKind::LParen);
        decl.payload_field = expect(TokenKind::Identifier).text;
        expect(TokenKind::Arrow);
        decl.inner = qualified_name();
        expect(TokenKind::RParen);
        if (at(TokenKind::KwIf)) {
            next();
            decl.condition = parse_expression();
        }
        return decl;
    }

    std::string qualified_name() {
        std::string name = expect(TokenKind::Identifier).text;
        if (at(TokenKind::Dot)) {
            next();
            name += "." + expect(TokenKind::Identifier).text;
        }
        return name;
    }

    // -- expressions --------------------------------------------------------

    Expr parse_expression() { return parse_or(); }

    Expr parse_or() {
        Expr e = parse_and();
        while (at(TokenKind::KwOr)) {
            next();
            e = Expr::logical_or(std::move(e), parse_and());
        }
        return e;
    }

    Expr parse_and() {
        Expr e = parse_relation();
        while (at(TokenKind::KwAnd)) {
            next();
            e = Expr::logical_and(std::move(e), parse_relation());
        }
        return e;
    }

    Expr parse_relation() {
        Expr e = parse_sum();
        switch (cur().kind) {
        case TokenKind::Equal: next(); return Expr::eq(std::move(e), parse_sum());
        case TokenKind::NotEqual: next(); return Expr::ne(std::move(e), parse_sum());
        case TokenKind::LessEqual: next(); return Expr::le(std::move(e), parse_sum());
        case TokenKind::GreaterEqual: next(); return Expr::ge(std::move(e), parse_sum());
        case TokenKind::Less: next(); return Expr::lt(std::move(e), parse_sum());
        case TokenKind::Greater: next(); return Expr::gt(std::move(e), parse_sum());
        default: return e;
        }
    }

    Expr parse_sum() {
        Expr e = parse_term();
        while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
            bool plus = at(TokenKind::Plus);
            next();
            Expr r = parse_term();
            e = plus ? Expr::add(std::move(e), std::move(r))
                     : Expr::sub(std::move(e), std::move(r));
        }
        return e;
    }

    Expr parse_term() {
        Expr e = parse_power();
        while (at(TokenKind::Star) || at(TokenKind::Slash)) {
            bool mul = at(TokenKind::Star);
            next();
            Expr r = parse_power();
            e = mul ? Expr::mul(std::move(e), std::move(r))
                    : Expr::div(std::move(e), std::move(r));
        }
        return e;
    }

    /// Exponentiation exists only at specification level and is folded here;
    /// the core expression language has no power constructor.
    Expr parse_power() {
        SourceLoc loc = cur().loc;
        Expr base = parse_primary();
        if (!at(TokenKind::StarStar))
            return base;
        next();
        Expr exponent = parse_primary();
        Expr fb = fold(base);
        Expr fe = fold(exponent);
        if (fb.kind() != Expr::Kind::Constant || fe.kind() != Expr::Kind::Constant)
            fail(loc, "operands of '**' must be constant", {});
        auto v = num::checked_pow(fb.value(), fe.value());
        if (!v)
            fail(loc, "constant expression overflows 64 bits", {});
        return Expr::constant(*v);
    }

    Expr parse_primary() {
        switch (cur().kind) {
        case TokenKind::Number: {
            Token t = cur();
            next();
            return Expr::constant(t.number);
        }
        case TokenKind::KwNot: {
            next();
            return Expr::logical_not(parse_primary());
        }
        case TokenKind::LParen: {
            next();
            Expr e = parse_expression();
            expect(TokenKind::RParen);
            return e;
        }
        case TokenKind::KwMessage: {
            next();
            expect(TokenKind::Tick);
            Token attr = expect(TokenKind::Identifier);
            std::string key = ascii_lower(attr.text);
            if (key == "last")
                return Expr::message_last();
            if (key == "length")
                return Expr::message_length();
            fail(attr.loc, "unknown attribute Message'" + attr.text, {"Last", "Length"});
        }
        case TokenKind::Identifier: {
            Token name = cur();
            next();
            std::string spelling = name.text;
            if (ascii_lower(spelling) == "true")
                return Expr::true_lit();
            if (ascii_lower(spelling) == "false")
                return Expr::false_lit();
            if (at(TokenKind::Tick)) {
                next();
                Token attr = expect(TokenKind::Identifier);
                std::string key = ascii_lower(attr.text);
                FieldId f = FieldId::named(spelling);
                if (key == "first")
                    return Expr::field_first(f);
                if (key == "last")
                    return Expr::field_last(f);
                if (key == "length")
                    return Expr::field_length(f);
                fail(attr.loc, "unknown attribute '" + attr.text + "'",
                     {"First", "Last", "Length"});
            }
            return Expr::field_value(FieldId::named(spelling));
        }
        default:
            fail(cur().loc, "expected an expression, found " + describe(cur()),
                 {"number", "identifier", "'('", "'not'", "'Message'"});
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<SyntaxError> errors_;
};

}  // namespace detail

/// Parses specification text into a SpecFile. On failure, the result is a
/// non-empty list of syntax errors with source positions and the token set
/// the parser would have accepted.
inline std::variant<SpecFile, std::vector<SyntaxError>> parse_spec(std::string_view text) {
    auto lexed = lex(text);
    if (const auto* err = std::get_if<SyntaxError>(&lexed))
        return std::vector<SyntaxError>{*err};
    detail::Parser parser(std::move(std::get<std::vector<Token>>(lexed)));
    return parser.run();
}

}  // namespace rflx::dsl
