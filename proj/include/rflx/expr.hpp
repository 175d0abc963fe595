// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rflx/field.hpp"

namespace rflx {

/// A path through a message graph: the list of edge indices walked from the
/// initial node. Paths identify message variants.
using Path = std::vector<std::size_t>;

inline std::string path_to_string(const Path& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(p[i]);
    }
    return s + "]";
}

namespace num {

// Checked unsigned 64-bit arithmetic. All quantities in the model (bit
// positions, lengths, field values) are non-negative; any overflow,
// underflow or division by zero is reported instead of wrapping.

inline std::optional<std::uint64_t> checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    if (r < a)
        return std::nullopt;
    return r;
}

inline std::optional<std::uint64_t> checked_sub(std::uint64_t a, std::uint64_t b) {
    if (b > a)
        return std::nullopt;
    return a - b;
}

inline std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a)
        return std::nullopt;
    return a * b;
}

inline std::optional<std::uint64_t> checked_div(std::uint64_t a, std::uint64_t b) {
    if (b == 0)
        return std::nullopt;
    return a / b;
}

inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        auto m = checked_mul(r, base);
        if (!m)
            return std::nullopt;
        r = *m;
    }
    return r;
}

}  // namespace num

/// Deep-embedded expression over message fields and buffer bounds.
///
/// Expressions appear in two phases. Edge attributes as written in a
/// specification use the field-reference constructors (FieldValue,
/// FieldFirst, FieldLength). Derivation substitutes those away, producing
/// closed expressions that may instead contain Read (a buffer read at a
/// computed position, standing in for the value of an already-located field)
/// and VariantCall (the validity of a predecessor variant).
///
/// Expr is an immutable value type; copies share structure.
class Expr {
public:
    enum class Kind : std::uint8_t {
        Constant,
        FieldValue,
        FieldFirst,
        FieldLength,
        MessageLength,  // total buffer length in bits
        MessageLast,    // index of the buffer's last bit (length - 1)
        Add,
        Sub,
        Mul,
        Div,
        Eq,
        Ne,
        Le,
        Ge,
        Lt,
        Gt,
        And,
        Or,
        Not,
        TrueLit,
        FalseLit,
        Read,         // substitution phase: value of bits [first, first+length)
        VariantCall,  // substitution phase: validity of the variant at `path`
    };

    Expr() = default;

    bool valid() const { return node_ != nullptr; }
    Kind kind() const { return node_->kind; }

    // -- constructors -------------------------------------------------------

    static Expr constant(std::uint64_t v) {
        Expr e = make(Kind::Constant);
        e.mut().value = v;
        return e;
    }
    static Expr field_value(FieldId f) { return field_node(Kind::FieldValue, std::move(f)); }
    static Expr field_first(FieldId f) { return field_node(Kind::FieldFirst, std::move(f)); }
    static Expr field_length(FieldId f) { return field_node(Kind::FieldLength, std::move(f)); }
    static Expr message_length() { return make(Kind::MessageLength); }
    static Expr message_last() { return make(Kind::MessageLast); }

    static Expr add(Expr l, Expr r) { return binary(Kind::Add, std::move(l), std::move(r)); }
    static Expr sub(Expr l, Expr r) { return binary(Kind::Sub, std::move(l), std::move(r)); }
    static Expr mul(Expr l, Expr r) { return binary(Kind::Mul, std::move(l), std::move(r)); }
    static Expr div(Expr l, Expr r) { return binary(Kind::Div, std::move(l), std::move(r)); }

    static Expr eq(Expr l, Expr r) { return binary(Kind::Eq, std::move(l), std::move(r)); }
    static Expr ne(Expr l, Expr r) { return binary(Kind::Ne, std::move(l), std::move(r)); }
    static Expr le(Expr l, Expr r) { return binary(Kind::Le, std::move(l), std::move(r)); }
    static Expr ge(Expr l, Expr r) { return binary(Kind::Ge, std::move(l), std::move(r)); }
    static Expr lt(Expr l, Expr r) { return binary(Kind::Lt, std::move(l), std::move(r)); }
    static Expr gt(Expr l, Expr r) { return binary(Kind::Gt, std::move(l), std::move(r)); }

    static Expr logical_and(Expr l, Expr r) { return binary(Kind::And, std::move(l), std::move(r)); }
    static Expr logical_or(Expr l, Expr r) { return binary(Kind::Or, std::move(l), std::move(r)); }
    static Expr logical_not(Expr operand) {
        Expr e = make(Kind::Not);
        e.mut().children.push_back(std::move(operand));
        return e;
    }

    static Expr true_lit() { return make(Kind::TrueLit); }
    static Expr false_lit() { return make(Kind::FalseLit); }

    static Expr read(Expr first, Expr length) {
        return binary(Kind::Read, std::move(first), std::move(length));
    }
    static Expr variant_call(Path p) {
        Expr e = make(Kind::VariantCall);
        e.mut().path = std::move(p);
        return e;
    }

    /// `f'Last` is not primitive; it desugars to f'First + f'Length - 1.
    static Expr field_last(const FieldId& f) {
        return sub(add(field_first(f), field_length(f)), constant(1));
    }

    // -- accessors ----------------------------------------------------------

    std::uint64_t value() const { return node_->value; }
    const FieldId& field() const { return node_->field; }
    const Expr& lhs() const { return node_->children[0]; }
    const Expr& rhs() const { return node_->children[1]; }
    const Expr& operand() const { return node_->children[0]; }
    const Expr& read_first() const { return node_->children[0]; }
    const Expr& read_length() const { return node_->children[1]; }
    const Path& call_path() const { return node_->path; }

    bool is_constant(std::uint64_t v) const {
        return valid() && kind() == Kind::Constant && value() == v;
    }

    friend bool operator==(const Expr& a, const Expr& b) {
        if (a.node_ == b.node_)
            return true;
        if (!a.valid() || !b.valid() || a.kind() != b.kind())
            return false;
        switch (a.kind()) {
        case Kind::Constant:
            return a.value() == b.value();
        case Kind::FieldValue:
        case Kind::FieldFirst:
        case Kind::FieldLength:
            return a.field() == b.field();
        case Kind::VariantCall:
            return a.call_path() == b.call_path();
        case Kind::Not:
            return a.lhs() == b.lhs();
        case Kind::MessageLength:
        case Kind::MessageLast:
        case Kind::TrueLit:
        case Kind::FalseLit:
            return true;
        default:
            return a.lhs() == b.lhs() && a.rhs() == b.rhs();
        }
    }
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    struct Node {
        Kind kind = Kind::TrueLit;
        std::uint64_t value = 0;
        FieldId field;
        std::vector<Expr> children;
        Path path;
    };

    static Expr make(Kind k) {
        Expr e;
        auto n = std::make_shared<Node>();
        n->kind = k;
        e.node_ = std::move(n);
        return e;
    }
    static Expr field_node(Kind k, FieldId f) {
        Expr e = make(k);
        e.mut().field = std::move(f);
        return e;
    }
    static Expr binary(Kind k, Expr l, Expr r) {
        Expr e = make(k);
        e.mut().children.push_back(std::move(l));
        e.mut().children.push_back(std::move(r));
        return e;
    }
    Node& mut() { return const_cast<Node&>(*node_); }

    std::shared_ptr<const Node> node_;
};

inline bool is_arith_op(Expr::Kind k) {
    return k == Expr::Kind::Add || k == Expr::Kind::Sub || k == Expr::Kind::Mul ||
           k == Expr::Kind::Div;
}

inline bool is_relation(Expr::Kind k) {
    return k == Expr::Kind::Eq || k == Expr::Kind::Ne || k == Expr::Kind::Le ||
           k == Expr::Kind::Ge || k == Expr::Kind::Lt || k == Expr::Kind::Gt;
}

// ---------------------------------------------------------------------------
// Sort checking

enum class Sort { Arithmetic, Boolean };

struct TypeError {
    Expr offending;
    std::string message;
};

using TypeCheckResult = std::variant<Sort, TypeError>;

/// Determines whether an expression is a well-sorted arithmetic or boolean
/// term. Field references must name fields from `scope`. Total: every
/// expression either has exactly one sort or yields a TypeError carrying the
/// offending subexpression.
inline TypeCheckResult type_check(const Expr& e, const std::set<FieldId>& scope) {
    using K = Expr::Kind;
    if (!e.valid())
        return TypeError{e, "empty expression"};
    switch (e.kind()) {
    case K::Constant:
    case K::MessageLength:
    case K::MessageLast:
        return Sort::Arithmetic;
    case K::TrueLit:
    case K::FalseLit:
        return Sort::Boolean;
    case K::FieldValue:
    case K::FieldFirst:
    case K::FieldLength:
        if (!scope.count(e.field()))
            return TypeError{e, "reference to unknown field '" + e.field().name() + "'"};
        return Sort::Arithmetic;
    case K::VariantCall:
        return Sort::Boolean;
    case K::Not: {
        auto r = type_check(e.operand(), scope);
        if (std::holds_alternative<TypeError>(r))
            return r;
        if (std::get<Sort>(r) != Sort::Boolean)
            return TypeError{e, "operand of 'not' is not boolean"};
        return Sort::Boolean;
    }
    default: {
        auto l = type_check(e.lhs(), scope);
        if (std::holds_alternative<TypeError>(l))
            return l;
        auto r = type_check(e.rhs(), scope);
        if (std::holds_alternative<TypeError>(r))
            return r;
        Sort ls = std::get<Sort>(l);
        Sort rs = std::get<Sort>(r);
        if (is_arith_op(e.kind()) || e.kind() == K::Read) {
            if (ls != Sort::Arithmetic || rs != Sort::Arithmetic)
                return TypeError{e, "arithmetic operator applied to boolean operand"};
            return Sort::Arithmetic;
        }
        if (is_relation(e.kind())) {
            if (ls != Sort::Arithmetic || rs != Sort::Arithmetic)
                return TypeError{e, "relation applied to boolean operand"};
            return Sort::Boolean;
        }
        // And / Or
        if (ls != Sort::Boolean || rs != Sort::Boolean)
            return TypeError{e, "logical operator applied to arithmetic operand"};
        return Sort::Boolean;
    }
    }
}

/// All fields referenced via FieldValue/FieldFirst/FieldLength.
inline void collect_references(const Expr& e, std::set<FieldId>& out) {
    using K = Expr::Kind;
    if (!e.valid())
        return;
    switch (e.kind()) {
    case K::FieldValue:
    case K::FieldFirst:
    case K::FieldLength:
        out.insert(e.field());
        return;
    case K::Constant:
    case K::MessageLength:
    case K::MessageLast:
    case K::TrueLit:
    case K::FalseLit:
    case K::VariantCall:
        return;
    case K::Not:
        collect_references(e.operand(), out);
        return;
    default:
        collect_references(e.lhs(), out);
        collect_references(e.rhs(), out);
        return;
    }
}

inline std::set<FieldId> references(const Expr& e) {
    std::set<FieldId> out;
    collect_references(e, out);
    return out;
}

inline bool contains_field_reference(const Expr& e) {
    using K = Expr::Kind;
    if (!e.valid())
        return false;
    switch (e.kind()) {
    case K::FieldValue:
    case K::FieldFirst:
    case K::FieldLength:
        return true;
    case K::Constant:
    case K::MessageLength:
    case K::MessageLast:
    case K::TrueLit:
    case K::FalseLit:
    case K::VariantCall:
        return false;
    case K::Not:
        return contains_field_reference(e.operand());
    default:
        return contains_field_reference(e.lhs()) || contains_field_reference(e.rhs());
    }
}

// ---------------------------------------------------------------------------
// Constant folding

/// Simplifies constant subterms bottom-up. Folding never changes evaluation
/// results: an operation that would fail at runtime (underflow, division by
/// zero, overflow) is left in place so the failure still surfaces during
/// evaluation.
inline Expr fold(const Expr& e) {
    using K = Expr::Kind;
    if (!e.valid())
        return e;
    switch (e.kind()) {
    case K::Constant:
    case K::FieldValue:
    case K::FieldFirst:
    case K::FieldLength:
    case K::MessageLength:
    case K::MessageLast:
    case K::TrueLit:
    case K::FalseLit:
    case K::VariantCall:
        return e;
    case K::Not: {
        Expr o = fold(e.operand());
        if (o.valid() && o.kind() == K::TrueLit)
            return Expr::false_lit();
        if (o.valid() && o.kind() == K::FalseLit)
            return Expr::true_lit();
        return Expr::logical_not(std::move(o));
    }
    case K::Read: {
        return Expr::read(fold(e.read_first()), fold(e.read_length()));
    }
    default: {
        Expr l = fold(e.lhs());
        Expr r = fold(e.rhs());
        bool lc = l.valid() && l.kind() == K::Constant;
        bool rc = r.valid() && r.kind() == K::Constant;
        if (is_arith_op(e.kind()) && lc && rc) {
            std::optional<std::uint64_t> v;
            switch (e.kind()) {
            case K::Add: v = num::checked_add(l.value(), r.value()); break;
            case K::Sub: v = num::checked_sub(l.value(), r.value()); break;
            case K::Mul: v = num::checked_mul(l.value(), r.value()); break;
            default: v = num::checked_div(l.value(), r.value()); break;
            }
            if (v)
                return Expr::constant(*v);
        } else if (is_relation(e.kind()) && lc && rc) {
            bool b = false;
            switch (e.kind()) {
            case K::Eq: b = l.value() == r.value(); break;
            case K::Ne: b = l.value() != r.value(); break;
            case K::Le: b = l.value() <= r.value(); break;
            case K::Ge: b = l.value() >= r.value(); break;
            case K::Lt: b = l.value() < r.value(); break;
            default: b = l.value() > r.value(); break;
            }
            return b ? Expr::true_lit() : Expr::false_lit();
        } else if (e.kind() == K::And) {
            if (l.kind() == K::FalseLit)
                return Expr::false_lit();
            if (l.kind() == K::TrueLit)
                return r;
            if (r.kind() == K::TrueLit)
                return l;
        } else if (e.kind() == K::Or) {
            if (l.kind() == K::TrueLit)
                return Expr::true_lit();
            if (l.kind() == K::FalseLit)
                return r;
            if (r.kind() == K::FalseLit)
                return l;
        }
        Expr out = Expr::constant(0);
        switch (e.kind()) {
        case K::Add: out = Expr::add(l, r); break;
        case K::Sub: out = Expr::sub(l, r); break;
        case K::Mul: out = Expr::mul(l, r); break;
        case K::Div: out = Expr::div(l, r); break;
        case K::Eq: out = Expr::eq(l, r); break;
        case K::Ne: out = Expr::ne(l, r); break;
        case K::Le: out = Expr::le(l, r); break;
        case K::Ge: out = Expr::ge(l, r); break;
        case K::Lt: out = Expr::lt(l, r); break;
        case K::Gt: out = Expr::gt(l, r); break;
        case K::And: out = Expr::logical_and(l, r); break;
        case K::Or: out = Expr::logical_or(l, r); break;
        default: out = Expr::read(l, r); break;
        }
        return out;
    }
    }
}

// ---------------------------------------------------------------------------
// Printing (specification surface syntax)

namespace detail {

inline int precedence(Expr::Kind k) {
    using K = Expr::Kind;
    switch (k) {
    case K::Or: return 1;
    case K::And: return 2;
    case K::Eq:
    case K::Ne:
    case K::Le:
    case K::Ge:
    case K::Lt:
    case K::Gt: return 3;
    case K::Add:
    case K::Sub: return 4;
    case K::Mul:
    case K::Div: return 5;
    case K::Not: return 6;
    default: return 7;
    }
}

inline const char* operator_token(Expr::Kind k) {
    using K = Expr::Kind;
    switch (k) {
    case K::Add: return "+";
    case K::Sub: return "-";
    case K::Mul: return "*";
    case K::Div: return "/";
    case K::Eq: return "=";
    case K::Ne: return "/=";
    case K::Le: return "<=";
    case K::Ge: return ">=";
    case K::Lt: return "<";
    case K::Gt: return ">";
    case K::And: return "and";
    case K::Or: return "or";
    default: return "?";
    }
}

/// Recognizes the f'First + f'Length - 1 desugaring so it prints as f'Last.
inline bool is_field_last(const Expr& e, FieldId& out) {
    using K = Expr::Kind;
    if (!e.valid() || e.kind() != K::Sub || !e.rhs().is_constant(1))
        return false;
    const Expr& a = e.lhs();
    if (!a.valid() || a.kind() != K::Add)
        return false;
    if (a.lhs().valid() && a.lhs().kind() == K::FieldFirst && a.rhs().valid() &&
        a.rhs().kind() == K::FieldLength && a.lhs().field() == a.rhs().field()) {
        out = a.lhs().field();
        return true;
    }
    return false;
}

inline void print_expr(const Expr& e, std::string& out, int parent_prec, bool right_side) {
    using K = Expr::Kind;
    if (!e.valid()) {
        out += "<invalid>";
        return;
    }
    FieldId last_field;
    if (is_field_last(e, last_field)) {
        out += last_field.name() + "'Last";
        return;
    }
    switch (e.kind()) {
    case K::Constant:
        out += std::to_string(e.value());
        return;
    case K::FieldValue:
        out += e.field().name();
        return;
    case K::FieldFirst:
        out += e.field().name() + "'First";
        return;
    case K::FieldLength:
        out += e.field().name() + "'Length";
        return;
    case K::MessageLength:
        out += "Message'Length";
        return;
    case K::MessageLast:
        out += "Message'Last";
        return;
    case K::TrueLit:
        out += "True";
        return;
    case K::FalseLit:
        out += "False";
        return;
    case K::Read: {
        out += "Read (";
        print_expr(e.read_first(), out, 0, false);
        out += ", ";
        print_expr(e.read_length(), out, 0, false);
        out += ")";
        return;
    }
    case K::VariantCall:
        out += "Valid_Variant " + path_to_string(e.call_path());
        return;
    case K::Not: {
        out += "not ";
        print_expr(e.operand(), out, precedence(K::Not), false);
        return;
    }
    default: {
        int prec = precedence(e.kind());
        bool parens = prec < parent_prec || (prec == parent_prec && right_side);
        if (parens)
            out += "(";
        print_expr(e.lhs(), out, prec, false);
        out += " ";
        out += operator_token(e.kind());
        out += " ";
        print_expr(e.rhs(), out, prec, true);
        if (parens)
            out += ")";
        return;
    }
    }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_expr(e, out, 0, false);
    return out;
}

}  // namespace rflx
