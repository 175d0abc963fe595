// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rflx/dsl/ast.hpp"
#include "rflx/expr.hpp"
#include "rflx/model.hpp"

namespace rflx::dsl {

/// Result of elaborating one specification file: message graphs and
/// refinements in declaration order. Message names are qualified as
/// `Package.Message`.
struct ElaboratedPackage {
    std::string package_name;
    std::vector<MessageGraph> messages;
    std::vector<Refinement> refinements;
};

using ElaborateResult = std::variant<ElaboratedPackage, std::vector<ElaborationError>>;

namespace detail {

inline const MessageGraph* find_message(const std::vector<const MessageGraph*>& messages,
                                        const std::string& qualified) {
    std::string key = ascii_lower(qualified);
    for (const MessageGraph* g : messages)
        if (ascii_lower(g->name()) == key)
            return g;
    return nullptr;
}

inline std::string qualify(const std::string& package, const std::string& name) {
    return name.find('.') != std::string::npos ? name : package + "." + name;
}

}  // namespace detail

/// Resolves a refinement declaration against a set of elaborated messages.
/// The condition (default: True) must be a boolean expression over the
/// outer message's fields, and the refined component must be a payload.
inline std::variant<Refinement, ElaborationError> elaborate_refinement(
    const RefinementDecl& decl, const std::string& package_name,
    const std::vector<const MessageGraph*>& messages) {
    const MessageGraph* outer =
        detail::find_message(messages, detail::qualify(package_name, decl.outer));
    if (outer == nullptr)
        return ElaborationError{decl.loc, "refinement '" + decl.name + "': unknown message '" +
                                              decl.outer + "'"};
    const MessageGraph* inner =
        detail::find_message(messages, detail::qualify(package_name, decl.inner));
    if (inner == nullptr)
        return ElaborationError{decl.loc, "refinement '" + decl.name + "': unknown message '" +
                                              decl.inner + "'"};
    FieldId payload = FieldId::named(decl.payload_field);
    const FieldType* t = outer->field_type(payload);
    if (t == nullptr)
        return ElaborationError{decl.loc, "refinement '" + decl.name + "': message '" +
                                              outer->name() + "' has no component '" +
                                              decl.payload_field + "'"};
    if (!is_opaque(*t))
        return ElaborationError{decl.loc, "refinement '" + decl.name + "': component '" +
                                              decl.payload_field +
                                              "' is not of the built-in type Payload"};
    Expr condition = decl.condition ? *decl.condition : Expr::true_lit();
    std::set<FieldId> scope;
    for (const auto& [f, ft] : outer->fields())
        scope.insert(f);
    auto sort = type_check(condition, scope);
    if (const auto* err = std::get_if<TypeError>(&sort))
        return ElaborationError{decl.loc, "refinement '" + decl.name + "': " + err->message};
    if (std::get<Sort>(sort) != Sort::Boolean)
        return ElaborationError{decl.loc,
                                "refinement '" + decl.name + "': condition is not boolean"};
    return Refinement{decl.name, outer->name(), payload, inner->name(), condition};
}

namespace detail {

inline const char* model_error_tag(ModelErrorKind k) {
    switch (k) {
    case ModelErrorKind::Cycle: return "cycle: ";
    case ModelErrorKind::Unreachable: return "unreachable field: ";
    case ModelErrorKind::DanglingReference: return "dangling reference: ";
    case ModelErrorKind::ForwardReference: return "forward reference: ";
    case ModelErrorKind::ExpressionType: return "expression type error: ";
    default: return "";
    }
}

struct MessageElaborator {
    const std::string& package_name;
    const std::map<std::string, FieldType>& scalar_types;
    std::vector<ElaborationError>& errors;

    std::optional<MessageGraph> run(const MessageDecl& decl) {
        std::size_t errors_before = errors.size();
        if (decl.components.empty()) {
            errors.push_back({decl.loc, "message '" + decl.name + "' has no components"});
            return std::nullopt;
        }
        std::vector<std::pair<FieldId, FieldType>> fields;
        std::map<std::string, FieldId> by_name;

        for (const Component& c : decl.components) {
            std::string key = ascii_lower(c.name);
            if (key == "initial" || key == "final" || key == "message") {
                errors.push_back(
                    {c.loc, "component name '" + c.name + "' is reserved"});
                continue;
            }
            if (by_name.count(key)) {
                errors.push_back({c.loc, "duplicate component '" + c.name + "' in message '" +
                                             decl.name + "'"});
                continue;
            }
            std::optional<FieldType> type = resolve_type(c);
            if (!type)
                continue;
            FieldId id = FieldId::named(c.name);
            by_name.emplace(key, id);
            fields.emplace_back(id, std::move(*type));
        }
        if (errors.size() != errors_before)
            return std::nullopt;

        std::vector<Edge> edges;
        const Component& first_comp = decl.components.front();
        FieldId first_field = by_name.at(ascii_lower(first_comp.name));
        std::optional<Expr> first_size = declared_size(fields, first_field);
        if (!first_size) {
            errors.push_back({first_comp.loc,
                              "payload component '" + first_comp.name +
                                  "' cannot start a message: its length is undefined"});
            return std::nullopt;
        }
        edges.push_back(Edge{FieldId::initial(), first_field, Expr::true_lit(), *first_size,
                             Expr::constant(0)});

        for (std::size_t i = 0; i < decl.components.size(); ++i) {
            const Component& c = decl.components[i];
            FieldId source = by_name.at(ascii_lower(c.name));
            Expr default_first =
                Expr::add(Expr::field_first(source), Expr::field_length(source));

            if (c.then_clauses.empty()) {
                FieldId target = (i + 1 < decl.components.size())
                                     ? by_name.at(ascii_lower(decl.components[i + 1].name))
                                     : FieldId::final();
                std::optional<Expr> length = target.is_final()
                                                 ? std::optional<Expr>(Expr::constant(0))
                                                 : declared_size(fields, target);
                if (!length) {
                    errors.push_back({c.loc, "payload component '" + target.name() +
                                                 "' requires an explicit Length aspect on every "
                                                 "incoming edge"});
                    continue;
                }
                edges.push_back(Edge{source, target, Expr::true_lit(), *length, default_first});
                continue;
            }
            for (const ThenClause& t : c.then_clauses) {
                Expr condition = t.condition ? *t.condition : Expr::true_lit();
                if (!t.target) {
                    if (t.length || t.first) {
                        errors.push_back({t.loc, "'then null' accepts only a condition, not "
                                                 "Length or First aspects"});
                        continue;
                    }
                    edges.push_back(Edge{source, FieldId::final(), condition, Expr::constant(0),
                                         default_first});
                    continue;
                }
                auto it = by_name.find(ascii_lower(*t.target));
                if (it == by_name.end()) {
                    errors.push_back({t.loc, "unknown field '" + *t.target + "' in message '" +
                                                 decl.name + "'"});
                    continue;
                }
                FieldId target = it->second;
                std::optional<Expr> length = t.length;
                if (!length)
                    length = declared_size(fields, target);
                if (!length) {
                    errors.push_back({t.loc, "payload component '" + target.name() +
                                                 "' requires an explicit Length aspect on every "
                                                 "incoming edge"});
                    continue;
                }
                Expr first = t.first ? *t.first : default_first;
                edges.push_back(Edge{source, target, condition, *length, first});
            }
        }
        if (errors.size() != errors_before)
            return std::nullopt;

        MessageGraph graph(package_name + "." + decl.name, std::move(fields), std::move(edges));
        for (const ModelError& e : validate_graph(graph))
            errors.push_back({decl.loc, "message '" + decl.name + "': " +
                                            model_error_tag(e.kind) + e.message});
        if (errors.size() != errors_before)
            return std::nullopt;
        return graph;
    }

    std::optional<FieldType> resolve_type(const Component& c) {
        auto it = scalar_types.find(ascii_lower(c.type_name));
        if (it != scalar_types.end())
            return it->second;
        if (ascii_lower(c.type_name) == "payload")
            return FieldType{OpaqueType{}};
        errors.push_back({c.loc, "unknown type '" + c.type_name + "' for component '" + c.name +
                                     "' (message types cannot be used as component types)"});
        return std::nullopt;
    }

    static std::optional<Expr> declared_size(
        const std::vector<std::pair<FieldId, FieldType>>& fields, const FieldId& f) {
        for (const auto& [id, t] : fields)
            if (id == f) {
                auto bits = type_size_bits(t);
                if (!bits)
                    return std::nullopt;
                return Expr::constant(*bits);
            }
        return std::nullopt;
    }
};

}  // namespace detail

/// Turns a parsed specification into message graphs and refinements.
///
/// Messages become graphs edge by edge: the initial node connects to the
/// first component (condition True, first bit 0); a component without then
/// clauses chains to the next component (or to Final); each then clause
/// becomes one edge with defaults filled in (condition True, first = end of
/// source, length = the target type's declared size; payload targets demand
/// an explicit Length). Every produced graph passes validate_graph.
///
/// Refinements resolve against this file's messages plus
/// `external_messages` (for refinements spanning packages).
inline ElaborateResult elaborate(const SpecFile& spec,
                                 const std::vector<MessageGraph>& external_messages = {}) {
    std::vector<ElaborationError> errors;
    ElaboratedPackage result;
    result.package_name = spec.package_name;

    // Declaration names must be unique within the package.
    std::set<std::string> names;
    for (const Declaration& d : spec.declarations) {
        const std::string& name = std::visit([](const auto& x) -> const std::string& {
            return x.name;
        }, d);
        SourceLoc loc = std::visit([](const auto& x) { return x.loc; }, d);
        if (!names.insert(ascii_lower(name)).second)
            errors.push_back({loc, "duplicate declaration '" + name + "'"});
    }

    // Scalar types, in order, checking their invariants.
    std::map<std::string, FieldType> scalar_types;
    for (const Declaration& d : spec.declarations) {
        if (const auto* s = std::get_if<ScalarTypeDecl>(&d)) {
            if (auto bad = type_invariant_error(s->type))
                errors.push_back({s->loc, "type '" + s->name + "': " + *bad});
            else
                scalar_types.emplace(ascii_lower(s->name), s->type);
        }
    }

    // Messages. Components may only use scalar types declared before them.
    std::map<std::string, FieldType> visible;
    for (const Declaration& d : spec.declarations) {
        if (const auto* s = std::get_if<ScalarTypeDecl>(&d)) {
            auto it = scalar_types.find(ascii_lower(s->name));
            if (it != scalar_types.end())
                visible.insert(*it);
        } else if (const auto* m = std::get_if<MessageDecl>(&d)) {
            detail::MessageElaborator elaborator{spec.package_name, visible, errors};
            if (auto graph = elaborator.run(*m))
                result.messages.push_back(std::move(*graph));
        }
    }

    // Refinements resolve against all messages of this file and the context.
    std::vector<const MessageGraph*> context;
    for (const MessageGraph& g : result.messages)
        context.push_back(&g);
    for (const MessageGraph& g : external_messages)
        context.push_back(&g);
    for (const Declaration& d : spec.declarations) {
        if (const auto* r = std::get_if<RefinementDecl>(&d)) {
            auto res = elaborate_refinement(*r, spec.package_name, context);
            if (const auto* err = std::get_if<ElaborationError>(&res))
                errors.push_back(*err);
            else
                result.refinements.push_back(std::get<Refinement>(std::move(res)));
        }
    }

    if (!errors.empty())
        return errors;
    return result;
}

}  // namespace rflx::dsl
