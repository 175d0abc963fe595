// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rflx/derive.hpp"
#include "rflx/expr.hpp"
#include "rflx/model.hpp"

namespace rflx {

struct GeneratedFile {
    std::string path;  // file name relative to the output directory
    std::string text;
};

struct CodegenOptions {
    std::string support_header = "rflx_gen_support.hpp";
    std::string root_namespace = "rflx_gen";
};

namespace codegen_detail {

inline std::string sanitize(const std::string& name) {
    static const std::set<std::string> reserved = {
        "alignas",  "auto",     "bool",     "break",   "case",     "char",   "class",
        "const",    "continue", "default",  "delete",  "do",       "double", "else",
        "enum",     "explicit", "export",   "extern",  "false",    "float",  "for",
        "friend",   "goto",     "if",       "inline",  "int",      "long",   "namespace",
        "new",      "operator", "private",  "public",  "register", "return", "short",
        "signed",   "sizeof",   "static",   "struct",  "switch",   "template",
        "this",     "throw",    "true",     "try",     "typedef",  "typename",
        "union",    "unsigned", "using",    "virtual", "void",     "volatile",
        "while",    "detail",   "gs",
    };
    std::string s = ascii_lower(name);
    if (reserved.count(s))
        s += "_";
    return s;
}

inline std::string path_id(const Path& p) {
    std::string s = "p";
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += (i ? "_" : "");
        s += std::to_string(p[i]);
    }
    return s;
}

/// Splits a qualified message name `Package.Message` into sanitized
/// namespace components.
inline std::pair<std::string, std::string> namespace_parts(const std::string& qualified) {
    auto dot = qualified.find('.');
    if (dot == std::string::npos)
        return {"pkg", sanitize(qualified)};
    return {sanitize(qualified.substr(0, dot)), sanitize(qualified.substr(dot + 1))};
}

inline std::string module_file_name(const std::string& qualified) {
    std::string s = ascii_lower(qualified);
    for (char& c : s)
        if (c == '.')
            c = '-';
    return s + ".hpp";
}

/// Transcribes a derived expression into generated C++. Closed expressions
/// (variant bodies, access attributes) never contain field references;
/// refinement conditions do, and resolve through the per-field helpers.
inline std::string emit(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Constant:
        return "gs::uc(" + std::to_string(e.value()) + "ULL)";
    case K::MessageLength:
        return "gs::msg_length(b)";
    case K::MessageLast:
        return "gs::msg_last(b)";
    case K::TrueLit:
        return "gs::bc(true)";
    case K::FalseLit:
        return "gs::bc(false)";
    case K::Read:
        return "gs::read_bits(b, " + emit(e.read_first()) + ", " + emit(e.read_length()) + ")";
    case K::VariantCall:
        return "gs::bc(detail::variant_valid_" + path_id(e.call_path()) + "(b))";
    case K::FieldValue:
        return "detail::field_value_" + sanitize(e.field().name()) + "(b)";
    case K::FieldFirst:
        return "detail::field_first_" + sanitize(e.field().name()) + "(b)";
    case K::FieldLength:
        return "detail::field_length_" + sanitize(e.field().name()) + "(b)";
    case K::Not:
        return "gs::b_not(" + emit(e.operand()) + ")";
    default: {
        const char* fn = nullptr;
        switch (e.kind()) {
        case K::Add: fn = "gs::add"; break;
        case K::Sub: fn = "gs::sub"; break;
        case K::Mul: fn = "gs::mul"; break;
        case K::Div: fn = "gs::divide"; break;
        case K::Eq: fn = "gs::cmp_eq"; break;
        case K::Ne: fn = "gs::cmp_ne"; break;
        case K::Le: fn = "gs::cmp_le"; break;
        case K::Ge: fn = "gs::cmp_ge"; break;
        case K::Lt: fn = "gs::cmp_lt"; break;
        case K::Gt: fn = "gs::cmp_gt"; break;
        case K::And: fn = "gs::b_and"; break;
        default: fn = "gs::b_or"; break;
        }
        return std::string(fn) + "(" + emit(e.lhs()) + ", " + emit(e.rhs()) + ")";
    }
    }
}

inline std::string support_text(const CodegenOptions& options) {
    std::string ns = options.root_namespace;
    std::string out;
    out += "// Generated by the rflx code generator; do not edit.\n";
    out += "//\n";
    out += "// Runtime support for generated message parsers: a labeled byte buffer,\n";
    out += "// checked unsigned arithmetic, and bounds-checked bit reads. Arithmetic\n";
    out += "// failures (overflow, underflow, division by zero) and out-of-range reads\n";
    out += "// poison the result instead of trapping; a poisoned check evaluates as\n";
    out += "// invalid. Contract violations (using a parser on an unlabeled buffer,\n";
    out += "// accessing an unvalidated field) throw contract_violation.\n";
    out += "\n#pragma once\n\n";
    out += "#include <cstdint>\n#include <stdexcept>\n#include <string>\n#include <vector>\n\n";
    out += "namespace " + ns + "::support {\n\n";
    out += "class contract_violation : public std::logic_error {\n";
    out += "public:\n";
    out += "    explicit contract_violation(const std::string& what) : std::logic_error(what) {}\n";
    out += "};\n\n";
    out += "// Non-owning view of the bytes to parse plus the label naming the message\n";
    out += "// format the buffer is claimed to hold.\n";
    out += "struct buffer {\n";
    out += "    const std::uint8_t* data = nullptr;\n";
    out += "    std::size_t size = 0;\n";
    out += "    std::string label;\n";
    out += "};\n\n";
    out += "inline buffer make_buffer(const std::vector<std::uint8_t>& bytes) {\n";
    out += "    return buffer{bytes.data(), bytes.size(), {}};\n";
    out += "}\n\n";
    out += "struct u64_result {\n";
    out += "    bool ok;\n";
    out += "    std::uint64_t value;\n";
    out += "};\n\n";
    out += "struct bool_result {\n";
    out += "    bool ok;\n";
    out += "    bool value;\n";
    out += "};\n\n";
    out += "inline u64_result uc(std::uint64_t v) { return {true, v}; }\n";
    out += "inline bool_result bc(bool v) { return {true, v}; }\n\n";
    out += "inline u64_result msg_length(const buffer& b) {\n";
    out += "    return {true, std::uint64_t{8} * b.size};\n";
    out += "}\n\n";
    out += "inline u64_result msg_last(const buffer& b) {\n";
    out += "    if (b.size == 0)\n";
    out += "        return {false, 0};\n";
    out += "    return {true, std::uint64_t{8} * b.size - 1};\n";
    out += "}\n\n";
    out += "inline u64_result add(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok)\n";
    out += "        return {false, 0};\n";
    out += "    std::uint64_t r = a.value + b.value;\n";
    out += "    if (r < a.value)\n";
    out += "        return {false, 0};\n";
    out += "    return {true, r};\n";
    out += "}\n\n";
    out += "inline u64_result sub(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok || b.value > a.value)\n";
    out += "        return {false, 0};\n";
    out += "    return {true, a.value - b.value};\n";
    out += "}\n\n";
    out += "inline u64_result mul(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok)\n";
    out += "        return {false, 0};\n";
    out += "    if (a.value != 0 && b.value > UINT64_MAX / a.value)\n";
    out += "        return {false, 0};\n";
    out += "    return {true, a.value * b.value};\n";
    out += "}\n\n";
    out += "inline u64_result divide(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok || b.value == 0)\n";
    out += "        return {false, 0};\n";
    out += "    return {true, a.value / b.value};\n";
    out += "}\n\n";
    out += "inline bool_result cmp_eq(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok)\n";
    out += "        return {false, false};\n";
    out += "    return {true, a.value == b.value};\n";
    out += "}\n\n";
    out += "inline bool_result cmp_ne(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok)\n";
    out += "        return {false, false};\n";
    out += "    return {true, a.value != b.value};\n";
    out += "}\n\n";
    out += "inline bool_result cmp_le(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok)\n";
    out += "        return {false, false};\n";
    out += "    return {true, a.value <= b.value};\n";
    out += "}\n\n";
    out += "inline bool_result cmp_ge(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok)\n";
    out += "        return {false, false};\n";
    out += "    return {true, a.value >= b.value};\n";
    out += "}\n\n";
    out += "inline bool_result cmp_lt(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok)\n";
    out += "        return {false, false};\n";
    out += "    return {true, a.value < b.value};\n";
    out += "}\n\n";
    out += "inline bool_result cmp_gt(u64_result a, u64_result b) {\n";
    out += "    if (!a.ok || !b.ok)\n";
    out += "        return {false, false};\n";
    out += "    return {true, a.value > b.value};\n";
    out += "}\n\n";
    out += "// Logical connectives; operands are evaluated eagerly (evaluation is\n";
    out += "// side-effect free) but the result matches short-circuit semantics:\n";
    out += "// a failed left operand poisons the result, a decided left operand\n";
    out += "// ignores the right one.\n";
    out += "inline bool_result b_and(bool_result a, bool_result b) {\n";
    out += "    if (!a.ok)\n";
    out += "        return {false, false};\n";
    out += "    if (!a.value)\n";
    out += "        return {true, false};\n";
    out += "    return b;\n";
    out += "}\n\n";
    out += "inline bool_result b_or(bool_result a, bool_result b) {\n";
    out += "    if (!a.ok)\n";
    out += "        return {false, false};\n";
    out += "    if (a.value)\n";
    out += "        return {true, true};\n";
    out += "    return b;\n";
    out += "}\n\n";
    out += "inline bool_result b_not(bool_result a) {\n";
    out += "    if (!a.ok)\n";
    out += "        return a;\n";
    out += "    return {true, !a.value};\n";
    out += "}\n\n";
    out += "// Bounds are re-checked on every read even where derivation implies\n";
    out += "// safety; a failed read poisons the result.\n";
    out += "inline u64_result read_bits(const buffer& b, u64_result first, u64_result length) {\n";
    out += "    if (!first.ok || !length.ok || length.value > 64)\n";
    out += "        return {false, 0};\n";
    out += "    std::uint64_t end = first.value + length.value;\n";
    out += "    if (end < first.value || end > std::uint64_t{8} * b.size)\n";
    out += "        return {false, 0};\n";
    out += "    std::uint64_t value = 0;\n";
    out += "    for (std::uint64_t bit = first.value; bit < end; ++bit)\n";
    out += "        value = (value << 1) | ((b.data[bit / 8] >> (7 - bit % 8)) & 1u);\n";
    out += "    return {true, value};\n";
    out += "}\n\n";
    out += "// A poisoned boolean counts as false: evaluation errors make the\n";
    out += "// enclosing check invalid rather than aborting.\n";
    out += "inline bool truth(bool_result r) { return r.ok && r.value; }\n\n";
    out += "inline void require(bool condition, const char* what) {\n";
    out += "    if (!condition)\n";
    out += "        throw contract_violation(what);\n";
    out += "}\n\n";
    out += "}  // namespace " + ns + "::support\n";
    return out;
}

}  // namespace codegen_detail

/// Emits a standalone parser module for one message: per-field Valid_*/Get_*
/// functions, whole-message Is_Valid, buffer labeling, and one contains
/// function per refinement whose outer message this is. The module is a
/// direct transcription of the derived variant and field functions; nothing
/// is re-derived at runtime. Output is deterministic: identical inputs give
/// byte-identical text.
inline std::vector<GeneratedFile> generate(const DerivedParser& parser,
                                           const std::vector<Refinement>& refinements,
                                           const CodegenOptions& options = {}) {
    namespace cd = codegen_detail;
    const MessageGraph& g = parser.graph;
    auto [pkg_ns, msg_ns] = cd::namespace_parts(g.name());

    std::string out;
    out += "// Generated by the rflx code generator; do not edit.\n";
    out += "//\n";
    out += "// Parser for " + g.name() + " messages. Validate before access: every\n";
    out += "// accessor requires a labeled buffer and a prior successful validity\n";
    out += "// check, enforced at runtime via contract_violation.\n";
    out += "\n#pragma once\n\n";
    out += "#include <cstdint>\n#include <optional>\n\n";
    out += "#include \"" + options.support_header + "\"\n\n";
    out += "namespace " + options.root_namespace + "::" + pkg_ns + "::" + msg_ns + " {\n\n";
    out += "namespace gs = ::" + options.root_namespace + "::support;\n\n";
    out += "inline constexpr const char* message_label = \"" + g.name() + "\";\n\n";
    out += "inline bool is_contained(const gs::buffer& b) { return b.label == message_label; }\n\n";
    out += "inline void label(gs::buffer& b) { b.label = message_label; }\n\n";
    out += "namespace detail {\n\n";

    // Variant functions. Map order guarantees callees precede callers: a
    // path's predecessor is a strict prefix and prefixes sort first.
    for (const auto& [path, fn] : parser.variant_valid) {
        out += "// variant " + path_to_string(path) + ": " +
               g.edge(path.back()).target.name() + "\n";
        out += "inline bool variant_valid_" + cd::path_id(path) + "(const gs::buffer& b) {\n";
        out += "    return gs::truth(" + cd::emit(fn.body) + ");\n";
        out += "}\n\n";
    }
    for (const auto& [path, fn] : parser.variant_access) {
        std::string id = cd::path_id(path);
        // Fully constant locations do not touch the buffer.
        auto param = [](const std::string& body) {
            return body.find("(b") == std::string::npos ? "const gs::buffer&"
                                                        : "const gs::buffer& b";
        };
        std::string first_body = cd::emit(fn.first);
        std::string length_body = cd::emit(fn.length);
        out += "inline gs::u64_result variant_first_" + id + "(" + param(first_body) + ") {\n";
        out += "    return " + first_body + ";\n";
        out += "}\n";
        out += "inline gs::u64_result variant_length_" + id + "(" + param(length_body) + ") {\n";
        out += "    return " + length_body + ";\n";
        out += "}\n\n";
    }

    // Field validity and slice lookup, in declaration order.
    for (const auto& [field, type] : g.fields()) {
        std::string id = cd::sanitize(field.name());
        const FieldValidFunc& fv = parser.field_valid.at(field);
        out += "inline bool field_valid_" + id + "(const gs::buffer& b) {\n";
        for (const auto& [path, disjunct] : fv.variants)
            out += "    if (gs::truth(" + cd::emit(disjunct) + "))\n        return true;\n";
        out += "    return false;\n";
        out += "}\n\n";

        const FieldAccessFunc& fa = parser.field_access.at(field);
        for (const char* attr : {"first", "length"}) {
            out += "inline gs::u64_result field_" + std::string(attr) + "_" + id +
                   "(const gs::buffer& b) {\n";
            out += "    if (!field_valid_" + id + "(b))\n        return {false, 0};\n";
            for (const Path& path : fa.variants)
                out += "    if (variant_valid_" + cd::path_id(path) + "(b))\n        return variant_" +
                       attr + "_" + cd::path_id(path) + "(b);\n";
            out += "    return {false, 0};\n";
            out += "}\n";
        }
        out += "inline gs::u64_result field_value_" + id + "(const gs::buffer& b) {\n";
        out += "    return gs::read_bits(b, field_first_" + id + "(b), field_length_" + id +
               "(b));\n";
        out += "}\n\n";
    }
    out += "}  // namespace detail\n\n";

    // Public surface.
    for (const auto& [field, type] : g.fields()) {
        std::string id = cd::sanitize(field.name());
        out += "inline bool valid_" + id + "(const gs::buffer& b) {\n";
        out += "    gs::require(is_contained(b), \"valid_" + id +
               ": buffer is not labeled '" + g.name() + "'\");\n";
        out += "    return detail::field_valid_" + id + "(b);\n";
        out += "}\n\n";
        if (!is_opaque(type)) {
            out += "inline std::uint64_t get_" + id + "(const gs::buffer& b) {\n";
            out += "    gs::require(is_contained(b), \"get_" + id +
                   ": buffer is not labeled '" + g.name() + "'\");\n";
            out += "    gs::require(detail::field_valid_" + id + "(b), \"get_" + id +
                   ": field has not been validated\");\n";
            out += "    gs::u64_result v = detail::field_value_" + id + "(b);\n";
            out += "    gs::require(v.ok, \"get_" + id + ": field slice is unreadable\");\n";
            out += "    return v.value;\n";
            out += "}\n\n";
        } else {
            out += "inline void get_" + id +
                   "(const gs::buffer& b, std::int64_t& first_bit, std::int64_t& last_bit) {\n";
            out += "    gs::require(is_contained(b), \"get_" + id +
                   ": buffer is not labeled '" + g.name() + "'\");\n";
            out += "    gs::require(detail::field_valid_" + id + "(b), \"get_" + id +
                   ": field has not been validated\");\n";
            out += "    gs::u64_result f = detail::field_first_" + id + "(b);\n";
            out += "    gs::u64_result l = detail::field_length_" + id + "(b);\n";
            out += "    gs::require(f.ok && l.ok, \"get_" + id + ": field slice is unreadable\");\n";
            out += "    first_bit = static_cast<std::int64_t>(f.value);\n";
            out += "    last_bit = static_cast<std::int64_t>(f.value + l.value) - 1;\n";
            out += "}\n\n";
        }
    }

    out += "// The whole message is accepted iff exactly one variant of the message\n";
    out += "// (one path to the final node) is valid.\n";
    out += "inline bool is_valid(const gs::buffer& b) {\n";
    out += "    gs::require(is_contained(b), \"is_valid: buffer is not labeled '" + g.name() +
           "'\");\n";
    out += "    int valid_paths = 0;\n";
    for (const Path& path : parser.final_paths)
        out += "    valid_paths += detail::variant_valid_" + cd::path_id(path) + "(b) ? 1 : 0;\n";
    out += "    return valid_paths == 1;\n";
    out += "}\n\n";

    for (const Refinement& r : refinements) {
        if (ascii_lower(r.outer_message) != ascii_lower(g.name()))
            continue;
        std::string id = cd::sanitize(r.name);
        std::string payload = cd::sanitize(r.payload_field.name());
        out += "// Refinement " + r.name + ": the " + r.payload_field.name() +
               " field holds a " + r.inner_message + " when the condition is true.\n";
        out += "inline std::optional<gs::buffer> contains_" + id + "(const gs::buffer& b) {\n";
        out += "    gs::require(is_contained(b), \"contains_" + id +
               ": buffer is not labeled '" + g.name() + "'\");\n";
        out += "    gs::require(is_valid(b), \"contains_" + id +
               ": buffer has not been validated\");\n";
        out += "    if (!gs::truth(" + cd::emit(r.condition) + "))\n";
        out += "        return std::nullopt;\n";
        out += "    gs::u64_result f = detail::field_first_" + payload + "(b);\n";
        out += "    gs::u64_result l = detail::field_length_" + payload + "(b);\n";
        out += "    gs::require(f.ok && l.ok, \"contains_" + id + ": payload slice is "
               "unreadable\");\n";
        out += "    gs::require(f.value % 8 == 0 && l.value % 8 == 0, \"contains_" + id +
               ": payload slice is not byte-aligned\");\n";
        out += "    gs::buffer inner;\n";
        out += "    inner.data = b.data + f.value / 8;\n";
        out += "    inner.size = static_cast<std::size_t>(l.value / 8);\n";
        out += "    inner.label = \"" + r.inner_message + "\";\n";
        out += "    return inner;\n";
        out += "}\n\n";
    }

    out += "}  // namespace " + options.root_namespace + "::" + pkg_ns + "::" + msg_ns + "\n";

    std::vector<GeneratedFile> files;
    files.push_back(GeneratedFile{cd::module_file_name(g.name()), std::move(out)});
    files.push_back(GeneratedFile{options.support_header, cd::support_text(options)});
    return files;
}

}  // namespace rflx
