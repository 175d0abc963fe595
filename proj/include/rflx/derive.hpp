// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rflx/expr.hpp"
#include "rflx/model.hpp"

namespace rflx {

/// Attributes of one path from the initial node: the last edge's condition,
/// length and first-bit expressions with every field reference substituted
/// away. After substitution the expressions are closed over the buffer: they
/// contain only constants, buffer bounds and Read primitives.
struct PathAttributes {
    Path path;
    Expr condition;
    Expr length;
    Expr first;
};

/// Validity of one variant of a field: in-bounds check, declared type range,
/// edge condition, and a call to the predecessor variant (absent for paths
/// of length one). The body is a closed boolean expression over the buffer.
struct VariantValidFunc {
    Path path;
    Expr body;
};

/// Location of one variant of a field: closed expressions for the first bit
/// and the bit length.
struct VariantAccessFunc {
    Path path;
    Expr first;
    Expr length;
};

/// Validity of a field: a disjunction over all variants of (variant valid
/// and one outgoing condition holds).
struct FieldValidFunc {
    FieldId field;
    Expr body;
    /// The disjuncts of `body` in path order, kept structured so evaluation
    /// and code generation can localize evaluation errors per variant.
    std::vector<std::pair<Path, Expr>> variants;
};

/// Access to a field: the first valid variant in path order provides the
/// slice.
struct FieldAccessFunc {
    FieldId field;
    std::vector<Path> variants;
};

/// The parser derived from a message graph: variant functions keyed by path
/// and field functions keyed by field, plus the graph they came from.
/// Immutable and safe to share across threads.
struct DerivedParser {
    MessageGraph graph;
    std::map<Path, VariantValidFunc> variant_valid;
    std::map<Path, VariantAccessFunc> variant_access;
    std::map<FieldId, FieldValidFunc> field_valid;
    std::map<FieldId, FieldAccessFunc> field_access;
    std::vector<Path> final_paths;  // all Initial -> Final paths, in path order
};

// ---------------------------------------------------------------------------
// Path enumeration

/// All paths from the initial node to `node`, each exactly once, ordered
/// lexicographically by edge index. The initial node itself has the single
/// empty path, so removing the last edge of any one-edge path is
/// well-defined.
inline std::vector<Path> paths_to(const MessageGraph& g, const FieldId& node) {
    std::vector<Path> out;
    if (node.is_initial()) {
        out.push_back({});
        return out;
    }
    Path current;
    detail::enumerate_paths_to(g, node, current, FieldId::initial(), out);
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

/// Fully substituted (first, length) location of every node along a path,
/// built front to back. Field references in an edge's attributes resolve to
/// the location the referenced field has on this particular path.
struct PathEnv {
    std::map<FieldId, std::pair<Expr, Expr>> located;  // field -> (first, length)
};

inline Expr substitute(const Expr& e, const PathEnv& env) {
    using K = Expr::Kind;
    if (!e.valid())
        return e;
    switch (e.kind()) {
    case K::Constant:
    case K::MessageLength:
    case K::MessageLast:
    case K::TrueLit:
    case K::FalseLit:
    case K::VariantCall:
        return e;
    case K::FieldValue: {
        auto it = env.located.find(e.field());
        if (it == env.located.end())
            throw std::logic_error("substitute: unresolved field '" + e.field().name() + "'");
        return Expr::read(it->second.first, it->second.second);
    }
    case K::FieldFirst: {
        auto it = env.located.find(e.field());
        if (it == env.located.end())
            throw std::logic_error("substitute: unresolved field '" + e.field().name() + "'");
        return it->second.first;
    }
    case K::FieldLength: {
        auto it = env.located.find(e.field());
        if (it == env.located.end())
            throw std::logic_error("substitute: unresolved field '" + e.field().name() + "'");
        return it->second.second;
    }
    case K::Not:
        return Expr::logical_not(substitute(e.operand(), env));
    case K::Read:
        return Expr::read(substitute(e.read_first(), env), substitute(e.read_length(), env));
    default: {
        Expr l = substitute(e.lhs(), env);
        Expr r = substitute(e.rhs(), env);
        switch (e.kind()) {
        case K::Add: return Expr::add(l, r);
        case K::Sub: return Expr::sub(l, r);
        case K::Mul: return Expr::mul(l, r);
        case K::Div: return Expr::div(l, r);
        case K::Eq: return Expr::eq(l, r);
        case K::Ne: return Expr::ne(l, r);
        case K::Le: return Expr::le(l, r);
        case K::Ge: return Expr::ge(l, r);
        case K::Lt: return Expr::lt(l, r);
        case K::Gt: return Expr::gt(l, r);
        case K::And: return Expr::logical_and(l, r);
        default: return Expr::logical_or(l, r);
        }
    }
    }
}

/// Environment after walking all edges of `path`; the edge attributes of
/// every walked edge are substituted as the walk proceeds.
inline PathEnv environment_of(const MessageGraph& g, const Path& path) {
    PathEnv env;
    for (std::size_t ei : path) {
        const Edge& e = g.edge(ei);
        Expr first = fold(substitute(e.first, env));
        Expr length = fold(substitute(e.length, env));
        env.located[e.target] = {first, length};
    }
    return env;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Path attributes

/// Derives the substituted (condition, length, first) attributes for every
/// path from the initial node to any node, grouped by the last edge's index
/// and lexicographic within a group. The expressions are closed: no field
/// references remain.
inline std::vector<PathAttributes> path_attrs(const MessageGraph& g) {
    std::vector<PathAttributes> out;
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
        const Edge& e = g.edge(ei);
        std::vector<Path> prefixes = paths_to(g, e.source);
        for (const Path& prefix : prefixes) {
            Path path = prefix;
            path.push_back(ei);
            detail::PathEnv env = detail::environment_of(g, prefix);
            out.push_back(PathAttributes{
                path,
                fold(detail::substitute(e.condition, env)),
                fold(detail::substitute(e.length, env)),
                fold(detail::substitute(e.first, env)),
            });
        }
    }
    return out;
}

namespace detail {

/// Declared-type constraint of a field on the wire value `Read(first, len)`:
/// range membership for range types, literal membership for enumerations.
/// Modular and opaque types constrain nothing beyond their width.
inline Expr type_range_condition(const FieldType& t, const Expr& first, const Expr& length) {
    if (const auto* r = std::get_if<RangeType>(&t)) {
        Expr v = Expr::read(first, length);
        return Expr::logical_and(Expr::ge(v, Expr::constant(r->lower)),
                                 Expr::le(v, Expr::constant(r->upper)));
    }
    if (const auto* en = std::get_if<EnumType>(&t)) {
        Expr v = Expr::read(first, length);
        Expr cond;
        for (auto it = en->literals.rbegin(); it != en->literals.rend(); ++it) {
            Expr eq = Expr::eq(v, Expr::constant(it->second));
            cond = cond.valid() ? Expr::logical_or(std::move(eq), std::move(cond)) : std::move(eq);
        }
        return cond;
    }
    return Expr::true_lit();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Variant functions

/// Builds the variant validation and access functions from path attributes.
/// A variant is valid when the field lies within the buffer, its wire value
/// satisfies the field's declared type, the edge condition holds, and the
/// predecessor variant (the path minus its last edge) is valid.
inline std::pair<std::map<Path, VariantValidFunc>, std::map<Path, VariantAccessFunc>>
variant_functions(const MessageGraph& g, const std::vector<PathAttributes>& attrs) {
    std::map<Path, VariantValidFunc> valid;
    std::map<Path, VariantAccessFunc> access;
    for (const PathAttributes& pa : attrs) {
        const Edge& last = g.edge(pa.path.back());

        Expr in_bounds =
            Expr::le(Expr::add(pa.first, pa.length), Expr::message_length());

        Expr body = pa.condition;
        if (pa.path.size() > 1) {
            Path predecessor(pa.path.begin(), pa.path.end() - 1);
            body = Expr::logical_and(std::move(body), Expr::variant_call(std::move(predecessor)));
        }
        if (last.target.is_named()) {
            const FieldType* t = g.field_type(last.target);
            if (t != nullptr) {
                Expr range = detail::type_range_condition(*t, pa.first, pa.length);
                body = Expr::logical_and(std::move(range), std::move(body));
            }
        }
        body = fold(Expr::logical_and(in_bounds, std::move(body)));

        valid.emplace(pa.path, VariantValidFunc{pa.path, body});
        access.emplace(pa.path, VariantAccessFunc{pa.path, pa.first, pa.length});
    }
    return {std::move(valid), std::move(access)};
}

// ---------------------------------------------------------------------------
// Node paths

/// For every user field: every path leading to it, paired with the
/// substituted disjunction of the conditions at its outgoing edges (at least
/// one of which must hold for the field to be valid). The disjunction ranges
/// over ordinary and Final-bound edges alike.
inline std::map<FieldId, std::vector<std::pair<Path, Expr>>> node_paths(const MessageGraph& g) {
    std::map<FieldId, std::vector<std::pair<Path, Expr>>> out;
    for (const auto& [f, t] : g.fields()) {
        std::vector<std::size_t> outgoing = g.outgoing(f);
        std::vector<std::pair<Path, Expr>> entries;
        for (const Path& path : paths_to(g, f)) {
            detail::PathEnv env = detail::environment_of(g, path);
            Expr disjunction;
            for (auto it = outgoing.rbegin(); it != outgoing.rend(); ++it) {
                Expr c = detail::substitute(g.edge(*it).condition, env);
                disjunction = disjunction.valid()
                                  ? Expr::logical_or(std::move(c), std::move(disjunction))
                                  : std::move(c);
            }
            if (!disjunction.valid())
                disjunction = Expr::false_lit();  // no outgoing edge: never valid
            entries.emplace_back(path, fold(disjunction));
        }
        out.emplace(f, std::move(entries));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Field functions

/// Builds the field validation and access functions. Validation is the
/// disjunction over all variants of (variant valid and its outgoing
/// condition); access selects the first valid variant in path order.
inline std::pair<std::map<FieldId, FieldValidFunc>, std::map<FieldId, FieldAccessFunc>>
field_functions(const std::map<FieldId, std::vector<std::pair<Path, Expr>>>& nps) {
    std::map<FieldId, FieldValidFunc> valid;
    std::map<FieldId, FieldAccessFunc> access;
    for (const auto& [f, entries] : nps) {
        std::vector<std::pair<Path, Expr>> variants;
        std::vector<Path> order;
        for (const auto& [path, out_cond] : entries) {
            variants.emplace_back(path,
                                  fold(Expr::logical_and(Expr::variant_call(path), out_cond)));
            order.push_back(path);
        }
        Expr body;
        for (auto it = variants.rbegin(); it != variants.rend(); ++it) {
            body = body.valid() ? Expr::logical_or(it->second, std::move(body)) : it->second;
        }
        if (!body.valid())
            body = Expr::false_lit();
        valid.emplace(f, FieldValidFunc{f, std::move(body), std::move(variants)});
        access.emplace(f, FieldAccessFunc{f, std::move(order)});
    }
    return {std::move(valid), std::move(access)};
}

// ---------------------------------------------------------------------------
// Composition

/// Derives the complete parser for a validated graph. Deterministic:
/// identical graphs produce structurally identical parsers.
inline DerivedParser derive_parser(const MessageGraph& g) {
    DerivedParser p;
    p.graph = g;
    auto attrs = path_attrs(g);
    auto [vv, va] = variant_functions(g, attrs);
    p.variant_valid = std::move(vv);
    p.variant_access = std::move(va);
    auto nps = node_paths(g);
    auto [fv, fa] = field_functions(nps);
    p.field_valid = std::move(fv);
    p.field_access = std::move(fa);
    p.final_paths = paths_to(g, FieldId::final());
    return p;
}

}  // namespace rflx
