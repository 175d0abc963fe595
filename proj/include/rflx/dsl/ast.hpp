// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rflx/expr.hpp"
#include "rflx/field.hpp"

namespace rflx::dsl {

struct SourceLoc {
    int line = 0;
    int column = 0;
};

/// `type NAME is mod N;` / `type NAME is range A .. B with Size => S;` /
/// `type NAME is (LIT => V, ...) with Size => S;`
struct ScalarTypeDecl {
    std::string name;
    FieldType type;
    SourceLoc loc;
};

/// One `then` clause of a component. An absent target means `then null`:
/// the message ends after the component. Absent aspects take defaults at
/// elaboration (condition True, first = end of source, length = declared
/// size of the target's type).
struct ThenClause {
    std::optional<std::string> target;
    std::optional<Expr> length;
    std::optional<Expr> first;
    std::optional<Expr> condition;
    SourceLoc loc;
};

struct Component {
    std::string name;
    std::string type_name;
    std::vector<ThenClause> then_clauses;
    SourceLoc loc;
};

struct MessageDecl {
    std::string name;
    std::vector<Component> components;
    SourceLoc loc;
};

/// `type NAME is new Outer.Message (Field => Inner.Message) if COND;`
struct RefinementDecl {
    std::string name;
    std::string outer;  // possibly qualified
    std::string payload_field;
    std::string inner;  // possibly qualified
    std::optional<Expr> condition;
    SourceLoc loc;
};

using Declaration = std::variant<ScalarTypeDecl, MessageDecl, RefinementDecl>;

struct SpecFile {
    std::string package_name;
    std::vector<Declaration> declarations;
};

struct SyntaxError {
    SourceLoc loc;
    std::string message;
    std::vector<std::string> expected;
};

struct ElaborationError {
    SourceLoc loc;
    std::string message;
};

// Structural equality, ignoring source locations. Used by the round-trip
// property: parse . print . parse must be the identity.

inline bool operator==(const ScalarTypeDecl& a, const ScalarTypeDecl& b) {
    if (a.name != b.name || a.type.index() != b.type.index())
        return false;
    if (const auto* m = std::get_if<ModularType>(&a.type))
        return m->modulus == std::get<ModularType>(b.type).modulus;
    if (const auto* r = std::get_if<RangeType>(&a.type)) {
        const auto& rb = std::get<RangeType>(b.type);
        return r->lower == rb.lower && r->upper == rb.upper && r->size_bits == rb.size_bits;
    }
    if (const auto* e = std::get_if<EnumType>(&a.type)) {
        const auto& eb = std::get<EnumType>(b.type);
        return e->literals == eb.literals && e->size_bits == eb.size_bits;
    }
    return true;
}

inline bool operator==(const ThenClause& a, const ThenClause& b) {
    return a.target == b.target && a.length == b.length && a.first == b.first &&
           a.condition == b.condition;
}

inline bool operator==(const Component& a, const Component& b) {
    return a.name == b.name && a.type_name == b.type_name && a.then_clauses == b.then_clauses;
}

inline bool operator==(const MessageDecl& a, const MessageDecl& b) {
    return a.name == b.name && a.components == b.components;
}

inline bool operator==(const RefinementDecl& a, const RefinementDecl& b) {
    return a.name == b.name && a.outer == b.outer && a.payload_field == b.payload_field &&
           a.inner == b.inner && a.condition == b.condition;
}

inline bool operator==(const SpecFile& a, const SpecFile& b) {
    return a.package_name == b.package_name && a.declarations == b.declarations;
}

}  // namespace rflx::dsl
