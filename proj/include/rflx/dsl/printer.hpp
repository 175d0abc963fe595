// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>

#include "rflx/dsl/ast.hpp"
#include "rflx/expr.hpp"

namespace rflx::dsl {

/// Canonical rendering of a SpecFile. Numbers print in decimal, aspects use
/// `=>`, keywords are lower case. Printing then re-parsing yields an equal
/// SpecFile value.
inline std::string pretty_print(const SpecFile& spec) {
    std::string out;
    out += "package " + spec.package_name + " is\n\n";
    for (const Declaration& decl : spec.declarations) {
        if (const auto* s = std::get_if<ScalarTypeDecl>(&decl)) {
            out += "   type " + s->name + " is ";
            if (const auto* m = std::get_if<ModularType>(&s->type)) {
                out += "mod " + std::to_string(m->modulus);
            } else if (const auto* r = std::get_if<RangeType>(&s->type)) {
                out += "range " + std::to_string(r->lower) + " .. " + std::to_string(r->upper) +
                       " with Size => " + std::to_string(r->size_bits);
            } else if (const auto* e = std::get_if<EnumType>(&s->type)) {
                out += "(";
                for (std::size_t i = 0; i < e->literals.size(); ++i) {
                    if (i)
                        out += ", ";
                    out += e->literals[i].first + " => " + std::to_string(e->literals[i].second);
                }
                out += ") with Size => " + std::to_string(e->size_bits);
            }
            out += ";\n";
        } else if (const auto* m = std::get_if<MessageDecl>(&decl)) {
            out += "   type " + m->name + " is\n      message\n";
            for (const Component& c : m->components) {
                out += "         " + c.name + " : " + c.type_name;
                for (std::size_t i = 0; i < c.then_clauses.size(); ++i) {
                    const ThenClause& t = c.then_clauses[i];
                    out += "\n            then " + (t.target ? *t.target : std::string("null"));
                    if (t.length || t.first) {
                        out += " with ";
                        bool comma = false;
                        if (t.length) {
                            out += "Length => " + to_string(*t.length);
                            comma = true;
                        }
                        if (t.first) {
                            if (comma)
                                out += ", ";
                            out += "First => " + to_string(*t.first);
                        }
                    }
                    if (t.condition)
                        out += " if " + to_string(*t.condition);
                    out += (i + 1 < c.then_clauses.size()) ? "," : "";
                }
                out += ";\n";
            }
            out += "      end message;\n";
        } else if (const auto* r = std::get_if<RefinementDecl>(&decl)) {
            out += "   type " + r->name + " is new " + r->outer + " (" + r->payload_field +
                   " => " + r->inner + ")";
            if (r->condition)
                out += " if " + to_string(*r->condition);
            out += ";\n";
        }
    }
    out += "\nend " + spec.package_name + ";\n";
    return out;
}

}  // namespace rflx::dsl
