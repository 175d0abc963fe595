// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "rflx/model.hpp"

namespace rflx {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

/// Renders a message graph as a DOT digraph: one node per field plus the
/// Initial/Final sentinels, one edge per model edge labeled with its index
/// and (condition, length, first) attributes. Output is stable for
/// identical graphs.
inline std::string to_dot(const MessageGraph& g) {
    std::string out;
    out += "digraph \"" + detail::dot_escape(g.name()) + "\" {\n";
    out += "    rankdir=LR;\n";
    out += "    node [shape=box];\n";
    out += "    \"Initial\" [shape=point];\n";
    for (const auto& [f, t] : g.fields())
        out += "    \"" + detail::dot_escape(f.name()) + "\";\n";
    out += "    \"Final\" [shape=doublecircle, label=\"\"];\n";
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const Edge& e = g.edges()[i];
        out += "    \"" + detail::dot_escape(e.source.name()) + "\" -> \"" +
               detail::dot_escape(e.target.name()) + "\" [label=\"[" + std::to_string(i) +
               "] if " + detail::dot_escape(to_string(e.condition)) + "\\nlength: " +
               detail::dot_escape(to_string(e.length)) + "\\nfirst: " +
               detail::dot_escape(to_string(e.first)) + "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace rflx
