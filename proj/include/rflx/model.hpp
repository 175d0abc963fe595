// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rflx/expr.hpp"
#include "rflx/field.hpp"

namespace rflx {

/// A dependency between two fields: `target` follows `source` when
/// `condition` holds; `length` and `first` give the target's extent and the
/// position of its first bit. All three expressions may refer only to fields
/// that precede the target.
struct Edge {
    FieldId source;
    FieldId target;
    Expr condition;
    Expr length;
    Expr first;
};

/// A message format as a directed acyclic graph. Nodes are fields (plus the
/// virtual Initial and Final sentinels), edges carry the condition/length/
/// first attributes. Each path Initial -> Final is one variant of the
/// message. Edges are identified by their index in declaration order; that
/// index is the stable identity used by paths and derived functions.
///
/// Immutable after construction; safe to share across threads.
class MessageGraph {
public:
    MessageGraph() = default;
    MessageGraph(std::string name, std::vector<std::pair<FieldId, FieldType>> fields,
                 std::vector<Edge> edges)
        : name_(std::move(name)), fields_(std::move(fields)), edges_(std::move(edges)) {
        for (std::size_t i = 0; i < fields_.size(); ++i)
            index_.emplace(fields_[i].first, i);
    }

    const std::string& name() const { return name_; }
    const std::vector<std::pair<FieldId, FieldType>>& fields() const { return fields_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(std::size_t i) const { return edges_.at(i); }

    bool has_field(const FieldId& f) const { return index_.count(f) != 0; }

    const FieldType* field_type(const FieldId& f) const {
        auto it = index_.find(f);
        return it == index_.end() ? nullptr : &fields_[it->second].second;
    }

    std::vector<std::size_t> outgoing(const FieldId& f) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].source == f)
                out.push_back(i);
        return out;
    }

    std::vector<std::size_t> incoming(const FieldId& f) const {
        std::vector<std::size_t> in;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].target == f)
                in.push_back(i);
        return in;
    }

private:
    std::string name_;
    std::vector<std::pair<FieldId, FieldType>> fields_;
    std::vector<Edge> edges_;
    std::map<FieldId, std::size_t> index_;
};

/// Declares that `payload_field` of `outer_message` holds an
/// `inner_message` whenever `condition` (over the outer message's fields)
/// is true.
struct Refinement {
    std::string name;
    std::string outer_message;
    FieldId payload_field;
    std::string inner_message;
    Expr condition;
};

enum class ModelErrorKind {
    Cycle,
    Unreachable,
    DanglingReference,
    ForwardReference,
    ExpressionType,
    Structure,
};

struct ModelError {
    ModelErrorKind kind;
    std::string message;
};

namespace detail {

inline void enumerate_paths_to(const MessageGraph& g, const FieldId& node, Path& current,
                               const FieldId& at, std::vector<Path>& out) {
    if (at == node) {
        out.push_back(current);
        if (node.is_named() || node.is_final())
            return;  // a DAG path cannot revisit, but Initial matches at the root only
    }
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        if (g.edges()[i].source == at) {
            current.push_back(i);
            enumerate_paths_to(g, node, current, g.edges()[i].target, out);
            current.pop_back();
        }
    }
}

}  // namespace detail

/// Structural well-formedness of a message graph. An empty result means the
/// graph is a DAG rooted at Initial and sunk at Final, every field lies on
/// some Initial-to-Final path, every expression is well-sorted, and every
/// field reference points strictly backwards along every path it occurs on.
inline std::vector<ModelError> validate_graph(const MessageGraph& g) {
    std::vector<ModelError> errors;
    auto err = [&](ModelErrorKind k, std::string m) {
        errors.push_back(ModelError{k, std::move(m)});
    };

    for (const auto& [f, t] : g.fields()) {
        if (!f.is_named()) {
            err(ModelErrorKind::Structure, "sentinel node declared as a field");
            continue;
        }
        if (f.name().empty())
            err(ModelErrorKind::Structure, "field with empty name");
        if (auto bad = type_invariant_error(t))
            err(ModelErrorKind::Structure, "field '" + f.name() + "': " + *bad);
    }

    if (g.edges().empty()) {
        err(ModelErrorKind::Structure, "message graph has no edges");
        return errors;
    }

    // Endpoint sanity.
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const Edge& e = g.edges()[i];
        if (e.source.is_final())
            err(ModelErrorKind::Structure,
                "edge " + std::to_string(i) + ": the final node has no outgoing edges");
        if (e.target.is_initial())
            err(ModelErrorKind::Structure,
                "edge " + std::to_string(i) + ": the initial node has no incoming edges");
        if (e.source.is_named() && !g.has_field(e.source))
            err(ModelErrorKind::DanglingReference,
                "edge " + std::to_string(i) + ": unknown source field '" + e.source.name() + "'");
        if (e.target.is_named() && !g.has_field(e.target))
            err(ModelErrorKind::DanglingReference,
                "edge " + std::to_string(i) + ": unknown target field '" + e.target.name() + "'");
    }
    if (!errors.empty())
        return errors;

    // Cycle detection (iterative DFS, three colors).
    std::map<FieldId, int> color;  // 0 white, 1 gray, 2 black
    bool cyclic = false;
    auto dfs = [&](const FieldId& start) {
        std::vector<std::pair<FieldId, std::size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            std::size_t i = next;
            bool advanced = false;
            for (; i < g.edges().size(); ++i) {
                if (!(g.edges()[i].source == node))
                    continue;
                next = i + 1;
                const FieldId& t = g.edges()[i].target;
                int c = color.count(t) ? color[t] : 0;
                if (c == 1) {
                    cyclic = true;
                    return;
                }
                if (c == 0) {
                    color[t] = 1;
                    stack.emplace_back(t, 0);
                    advanced = true;
                    break;
                }
            }
            if (!advanced && i >= g.edges().size()) {
                color[node] = 2;
                stack.pop_back();
            }
        }
    };
    dfs(FieldId::initial());
    if (cyclic) {
        err(ModelErrorKind::Cycle, "message graph contains a cycle");
        return errors;
    }

    // Reachability from Initial and co-reachability to Final.
    std::set<FieldId> from_initial;
    {
        std::vector<FieldId> work{FieldId::initial()};
        from_initial.insert(FieldId::initial());
        while (!work.empty()) {
            FieldId n = work.back();
            work.pop_back();
            for (const Edge& e : g.edges())
                if (e.source == n && !from_initial.count(e.target)) {
                    from_initial.insert(e.target);
                    work.push_back(e.target);
                }
        }
    }
    std::set<FieldId> to_final;
    {
        std::vector<FieldId> work{FieldId::final()};
        to_final.insert(FieldId::final());
        while (!work.empty()) {
            FieldId n = work.back();
            work.pop_back();
            for (const Edge& e : g.edges())
                if (e.target == n && !to_final.count(e.source)) {
                    to_final.insert(e.source);
                    work.push_back(e.source);
                }
        }
    }
    for (const auto& [f, t] : g.fields()) {
        if (!from_initial.count(f))
            err(ModelErrorKind::Unreachable,
                "field '" + f.name() + "' is not reachable from the initial node");
        else if (!to_final.count(f))
            err(ModelErrorKind::Unreachable,
                "field '" + f.name() + "' cannot reach the final node");
    }
    if (!from_initial.count(FieldId::final()))
        err(ModelErrorKind::Unreachable, "the final node is not reachable from the initial node");
    if (!errors.empty())
        return errors;

    // Expression sorts and reference targets.
    std::set<FieldId> all_fields;
    for (const auto& [f, t] : g.fields())
        all_fields.insert(f);

    auto check_sort = [&](const Expr& e, Sort want, std::size_t edge_idx, const char* what) {
        auto r = type_check(e, all_fields);
        if (const auto* te = std::get_if<TypeError>(&r)) {
            bool unknown = te->message.rfind("reference to unknown field", 0) == 0;
            err(unknown ? ModelErrorKind::DanglingReference : ModelErrorKind::ExpressionType,
                "edge " + std::to_string(edge_idx) + " (" + what + "): " + te->message);
            return;
        }
        if (std::get<Sort>(r) != want)
            err(ModelErrorKind::ExpressionType,
                "edge " + std::to_string(edge_idx) + " (" + what + "): expected " +
                    (want == Sort::Boolean ? "boolean" : "arithmetic") + " expression");
    };
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const Edge& e = g.edges()[i];
        check_sort(e.condition, Sort::Boolean, i, "condition");
        check_sort(e.length, Sort::Arithmetic, i, "length");
        check_sort(e.first, Sort::Arithmetic, i, "first");
    }
    if (!errors.empty())
        return errors;

    // Every reference must resolve to a node that precedes the edge's target
    // on every Initial-rooted path running through the edge; this is what
    // makes sequential evaluation (and substitution) well-defined.
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const Edge& e = g.edges()[i];
        std::set<FieldId> refs = references(e.condition);
        collect_references(e.length, refs);
        collect_references(e.first, refs);
        if (refs.empty())
            continue;

        std::vector<Path> to_source;
        Path current;
        if (e.source.is_initial()) {
            to_source.push_back({});
        } else {
            detail::enumerate_paths_to(g, e.source, current, FieldId::initial(), to_source);
        }
        for (const Path& p : to_source) {
            std::set<FieldId> preceding;
            for (std::size_t ei : p)
                preceding.insert(g.edges()[ei].target);
            for (const FieldId& r : refs) {
                if (!preceding.count(r)) {
                    err(ModelErrorKind::ForwardReference,
                        "edge " + std::to_string(i) + ": reference to field '" + r.name() +
                            "' which does not precede '" + e.target.name() +
                            "' on every path through the edge");
                }
            }
        }
    }

    // Deduplicate identical diagnostics from different paths.
    std::sort(errors.begin(), errors.end(), [](const ModelError& a, const ModelError& b) {
        return std::tie(a.kind, a.message) < std::tie(b.kind, b.message);
    });
    errors.erase(std::unique(errors.begin(), errors.end(),
                             [](const ModelError& a, const ModelError& b) {
                                 return a.kind == b.kind && a.message == b.message;
                             }),
                 errors.end());
    return errors;
}

}  // namespace rflx
