// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace rflx {

inline std::string ascii_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    return out;
}

/// Identifies a field of a message. Besides user-declared fields there are
/// two virtual sentinels: Initial (marks the start of a message and anchors
/// the first field's position) and Final (marks the end and carries the
/// whole-message invariants). Comparison is case-insensitive; the original
/// spelling is preserved for display.
class FieldId {
public:
    enum class Kind : std::uint8_t { Initial = 0, Named = 1, Final = 2 };

    FieldId() : kind_(Kind::Initial), name_("Initial"), key_("initial") {}

    static FieldId initial() { return FieldId(); }

    static FieldId final() {
        FieldId f;
        f.kind_ = Kind::Final;
        f.name_ = "Final";
        f.key_ = "final";
        return f;
    }

    static FieldId named(std::string name) {
        FieldId f;
        f.kind_ = Kind::Named;
        f.key_ = ascii_lower(name);
        f.name_ = std::move(name);
        return f;
    }

    Kind kind() const { return kind_; }
    bool is_initial() const { return kind_ == Kind::Initial; }
    bool is_final() const { return kind_ == Kind::Final; }
    bool is_named() const { return kind_ == Kind::Named; }

    /// Display spelling (case preserved as declared).
    const std::string& name() const { return name_; }
    /// Case-folded spelling used for resolution and ordering.
    const std::string& key() const { return key_; }

    friend bool operator==(const FieldId& a, const FieldId& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::Named || a.key_ == b.key_);
    }
    friend bool operator!=(const FieldId& a, const FieldId& b) { return !(a == b); }
    friend bool operator<(const FieldId& a, const FieldId& b) {
        return std::tie(a.kind_, a.key_) < std::tie(b.kind_, b.key_);
    }

private:
    Kind kind_;
    std::string name_;
    std::string key_;
};

// ---------------------------------------------------------------------------
// Field types

/// Unsigned integer type holding 0 .. modulus-1; modulus must be a power of
/// two >= 2. Occupies log2(modulus) bits on the wire.
struct ModularType {
    std::uint64_t modulus = 2;
};

/// Unsigned integer type restricted to lower .. upper, with an explicit wire
/// size in bits.
struct RangeType {
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    std::uint32_t size_bits = 0;
};

/// Named integer constants; any wire value outside the literal set makes the
/// field invalid.
struct EnumType {
    std::vector<std::pair<std::string, std::uint64_t>> literals;
    std::uint32_t size_bits = 0;
};

/// Variable-length uninterpreted bytes; the only refinable type. Its length
/// is always given by an edge expression, never by the type itself.
struct OpaqueType {};

using FieldType = std::variant<ModularType, RangeType, EnumType, OpaqueType>;

inline bool is_opaque(const FieldType& t) {
    return std::holds_alternative<OpaqueType>(t);
}

/// Wire size in bits of a scalar type; nullopt for opaque payloads.
inline std::optional<std::uint32_t> type_size_bits(const FieldType& t) {
    if (const auto* m = std::get_if<ModularType>(&t)) {
        std::uint32_t bits = 0;
        for (std::uint64_t v = m->modulus; v > 1; v >>= 1)
            ++bits;
        return bits;
    }
    if (const auto* r = std::get_if<RangeType>(&t))
        return r->size_bits;
    if (const auto* e = std::get_if<EnumType>(&t))
        return e->size_bits;
    return std::nullopt;
}

/// Checks the structural invariants of a type definition. Returns a
/// description of the first violation, or nullopt if the type is sound.
/// Scalar types wider than 64 bits are rejected: decoded values are
/// represented as uint64.
inline std::optional<std::string> type_invariant_error(const FieldType& t) {
    if (const auto* m = std::get_if<ModularType>(&t)) {
        if (m->modulus < 2 || (m->modulus & (m->modulus - 1)) != 0)
            return "modulus must be a power of two >= 2";
        return std::nullopt;
    }
    if (const auto* r = std::get_if<RangeType>(&t)) {
        if (r->size_bits == 0 || r->size_bits > 64)
            return "range size must be between 1 and 64 bits";
        if (r->lower > r->upper)
            return "range lower bound exceeds upper bound";
        if (r->size_bits < 64 && r->upper >= (std::uint64_t{1} << r->size_bits))
            return "range upper bound does not fit in declared size";
        return std::nullopt;
    }
    if (const auto* e = std::get_if<EnumType>(&t)) {
        if (e->size_bits == 0 || e->size_bits > 64)
            return "enumeration size must be between 1 and 64 bits";
        if (e->literals.empty())
            return "enumeration must have at least one literal";
        for (std::size_t i = 0; i < e->literals.size(); ++i) {
            const auto& [name, value] = e->literals[i];
            if (e->size_bits < 64 && value >= (std::uint64_t{1} << e->size_bits))
                return "enumeration value of '" + name + "' does not fit in declared size";
            for (std::size_t j = i + 1; j < e->literals.size(); ++j) {
                if (value == e->literals[j].second)
                    return "duplicate enumeration value " + std::to_string(value);
                if (ascii_lower(name) == ascii_lower(e->literals[j].first))
                    return "duplicate enumeration literal '" + name + "'";
            }
        }
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace rflx
