// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rflx/derive.hpp"
#include "rflx/expr.hpp"
#include "rflx/model.hpp"

namespace rflx {

/// Raised when a runtime precondition is violated: accessing an unlabeled or
/// mislabeled buffer, accessing a field without established validity, or
/// slicing a refinement payload that is not byte-aligned. These checks are
/// always on; they are the executable counterpart of the generated-code
/// contracts.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// A byte buffer plus the label stating which message format it is claimed
/// to hold. Validation and access refuse to run until the buffer is labeled,
/// either explicitly (data from an external source) or by a refinement
/// `contains` check. Slicing shares the underlying storage; nothing is
/// copied.
///
/// Validation and access are read-only and safe to run concurrently over
/// the same buffer; set_label mutates metadata and must happen before any
/// concurrent use.
class MessageBuffer {
public:
    MessageBuffer() : storage_(std::make_shared<std::vector<std::uint8_t>>()) {}

    explicit MessageBuffer(std::vector<std::uint8_t> bytes)
        : storage_(std::make_shared<std::vector<std::uint8_t>>(std::move(bytes))),
          size_(storage_->size()) {}

    MessageBuffer(std::vector<std::uint8_t> bytes, std::string label)
        : MessageBuffer(std::move(bytes)) {
        label_ = std::move(label);
    }

    void set_label(std::string label) { label_ = std::move(label); }
    const std::optional<std::string>& label() const { return label_; }

    std::size_t size_bytes() const { return size_; }
    std::uint64_t size_bits() const { return std::uint64_t{8} * size_; }

    std::uint8_t byte(std::size_t i) const { return (*storage_)[offset_ + i]; }

    /// A zero-copy sub-buffer carrying a fresh label.
    MessageBuffer slice_bytes(std::size_t offset, std::size_t length, std::string label) const {
        MessageBuffer b;
        b.storage_ = storage_;
        b.offset_ = offset_ + offset;
        b.size_ = length;
        b.label_ = std::move(label);
        return b;
    }

private:
    std::shared_ptr<const std::vector<std::uint8_t>> storage_;
    std::size_t offset_ = 0;
    std::size_t size_ = 0;
    std::optional<std::string> label_;
};

// ---------------------------------------------------------------------------
// Evaluation results

enum class EvalError {
    DivisionByZero,
    Underflow,
    Overflow,
    OutOfBounds,
    Unsupported,
    Internal,
};

inline const char* to_string(EvalError e) {
    switch (e) {
    case EvalError::DivisionByZero: return "division by zero";
    case EvalError::Underflow: return "arithmetic underflow";
    case EvalError::Overflow: return "arithmetic overflow";
    case EvalError::OutOfBounds: return "buffer read out of bounds";
    case EvalError::Unsupported: return "unsupported operation";
    default: return "internal evaluation error";
    }
}

/// Value-or-error result of evaluating an expression. Evaluation never
/// throws and never performs undefined behavior; failed arithmetic and
/// out-of-range reads surface here and make the enclosing variant invalid.
template <typename T>
class EvalResult {
public:
    EvalResult(T value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
    EvalResult(EvalError error) : error_(error) {}     // NOLINT(google-explicit-constructor)

    bool ok() const { return value_.has_value(); }
    const T& operator*() const { return *value_; }
    EvalError error() const { return error_; }

private:
    std::optional<T> value_;
    EvalError error_ = EvalError::Internal;
};

/// An evaluated expression is either a number or a truth value.
using Value = std::variant<std::uint64_t, bool>;

/// Maximum width of a single buffer read; decoded field values are uint64.
inline constexpr std::uint64_t max_read_bits = 64;

/// Reads `length` bits starting at bit `first` as a big-endian,
/// most-significant-bit-first unsigned integer. Bit 0 is the most
/// significant bit of the first byte. Out-of-range requests are errors,
/// never undefined behavior.
inline EvalResult<std::uint64_t> read_bits(const MessageBuffer& buffer, std::uint64_t first,
                                           std::uint64_t length) {
    if (length > max_read_bits)
        return EvalError::Unsupported;
    auto end = num::checked_add(first, length);
    if (!end || *end > buffer.size_bits())
        return EvalError::OutOfBounds;
    std::uint64_t value = 0;
    for (std::uint64_t bit = first; bit < *end; ++bit) {
        std::uint8_t b = buffer.byte(static_cast<std::size_t>(bit / 8));
        value = (value << 1) | ((b >> (7 - bit % 8)) & 1u);
    }
    return value;
}

// ---------------------------------------------------------------------------
// Expression evaluation

namespace detail {

inline EvalResult<Value> eval_impl(const Expr& e, const MessageBuffer& buffer,
                                   const DerivedParser* parser);

inline EvalResult<std::uint64_t> eval_arith(const Expr& e, const MessageBuffer& buffer,
                                            const DerivedParser* parser) {
    auto r = eval_impl(e, buffer, parser);
    if (!r.ok())
        return r.error();
    if (!std::holds_alternative<std::uint64_t>(*r))
        return EvalError::Internal;
    return std::get<std::uint64_t>(*r);
}

inline EvalResult<bool> eval_bool(const Expr& e, const MessageBuffer& buffer,
                                  const DerivedParser* parser) {
    auto r = eval_impl(e, buffer, parser);
    if (!r.ok())
        return r.error();
    if (!std::holds_alternative<bool>(*r))
        return EvalError::Internal;
    return std::get<bool>(*r);
}

inline bool variant_valid_impl(const DerivedParser& parser, const Path& path,
                               const MessageBuffer& buffer);

inline EvalResult<Value> eval_impl(const Expr& e, const MessageBuffer& buffer,
                                   const DerivedParser* parser) {
    using K = Expr::Kind;
    if (!e.valid())
        return EvalError::Internal;
    switch (e.kind()) {
    case K::Constant:
        return Value{e.value()};
    case K::MessageLength:
        return Value{buffer.size_bits()};
    case K::MessageLast: {
        auto v = num::checked_sub(buffer.size_bits(), 1);
        if (!v)
            return EvalError::Underflow;
        return Value{*v};
    }
    case K::TrueLit:
        return Value{true};
    case K::FalseLit:
        return Value{false};
    case K::FieldValue:
    case K::FieldFirst:
    case K::FieldLength:
        return EvalError::Internal;  // must be substituted away before evaluation
    case K::Read: {
        auto first = eval_arith(e.read_first(), buffer, parser);
        if (!first.ok())
            return first.error();
        auto length = eval_arith(e.read_length(), buffer, parser);
        if (!length.ok())
            return length.error();
        auto v = read_bits(buffer, *first, *length);
        if (!v.ok())
            return v.error();
        return Value{*v};
    }
    case K::VariantCall: {
        if (parser == nullptr)
            return EvalError::Internal;
        return Value{variant_valid_impl(*parser, e.call_path(), buffer)};
    }
    case K::Not: {
        auto v = eval_bool(e.operand(), buffer, parser);
        if (!v.ok())
            return v.error();
        return Value{!*v};
    }
    case K::And: {
        auto l = eval_bool(e.lhs(), buffer, parser);
        if (!l.ok())
            return l.error();
        if (!*l)
            return Value{false};
        auto r = eval_bool(e.rhs(), buffer, parser);
        if (!r.ok())
            return r.error();
        return Value{*r};
    }
    case K::Or: {
        auto l = eval_bool(e.lhs(), buffer, parser);
        if (!l.ok())
            return l.error();
        if (*l)
            return Value{true};
        auto r = eval_bool(e.rhs(), buffer, parser);
        if (!r.ok())
            return r.error();
        return Value{*r};
    }
    default: {
        auto l = eval_arith(e.lhs(), buffer, parser);
        if (!l.ok())
            return l.error();
        auto r = eval_arith(e.rhs(), buffer, parser);
        if (!r.ok())
            return r.error();
        switch (e.kind()) {
        case K::Add: {
            auto v = num::checked_add(*l, *r);
            if (!v)
                return EvalError::Overflow;
            return Value{*v};
        }
        case K::Sub: {
            auto v = num::checked_sub(*l, *r);
            if (!v)
                return EvalError::Underflow;
            return Value{*v};
        }
        case K::Mul: {
            auto v = num::checked_mul(*l, *r);
            if (!v)
                return EvalError::Overflow;
            return Value{*v};
        }
        case K::Div: {
            auto v = num::checked_div(*l, *r);
            if (!v)
                return EvalError::DivisionByZero;
            return Value{*v};
        }
        case K::Eq: return Value{*l == *r};
        case K::Ne: return Value{*l != *r};
        case K::Le: return Value{*l <= *r};
        case K::Ge: return Value{*l >= *r};
        case K::Lt: return Value{*l < *r};
        default: return Value{*l > *r};
        }
    }
    }
}

/// A variant is valid iff its body evaluates to true; any evaluation error
/// makes the variant invalid rather than aborting.
inline bool variant_valid_impl(const DerivedParser& parser, const Path& path,
                               const MessageBuffer& buffer) {
    if (path.empty())
        return true;  // the initial node's empty path is vacuously valid
    auto it = parser.variant_valid.find(path);
    if (it == parser.variant_valid.end())
        return false;
    auto r = eval_bool(it->second.body, buffer, &parser);
    return r.ok() && *r;
}

inline void require_labeled(const DerivedParser& parser, const MessageBuffer& buffer,
                            const char* operation) {
    if (!buffer.label().has_value())
        throw ContractViolation(std::string(operation) + ": buffer is not labeled");
    if (ascii_lower(*buffer.label()) != ascii_lower(parser.graph.name()))
        throw ContractViolation(std::string(operation) + ": buffer labeled '" + *buffer.label() +
                                "' but parser expects '" + parser.graph.name() + "'");
}

}  // namespace detail

/// Evaluates a closed (fully substituted) expression against a buffer.
inline EvalResult<Value> eval(const Expr& e, const MessageBuffer& buffer) {
    return detail::eval_impl(e, buffer, nullptr);
}

// ---------------------------------------------------------------------------
// Validation and access

/// True iff the variant identified by `path` is valid on `buffer`: the
/// predecessor variant is valid, the field lies within the buffer, and the
/// substituted edge and type conditions hold.
inline bool variant_valid(const DerivedParser& parser, const Path& path,
                          const MessageBuffer& buffer) {
    detail::require_labeled(parser, buffer, "variant_valid");
    return detail::variant_valid_impl(parser, path, buffer);
}

/// True iff some variant of `field` is valid and one of the conditions at
/// the field's outgoing edges holds for it. Total: evaluation errors count
/// as an invalid disjunct.
inline bool field_valid(const DerivedParser& parser, const FieldId& field,
                        const MessageBuffer& buffer) {
    detail::require_labeled(parser, buffer, "field_valid");
    auto it = parser.field_valid.find(field);
    if (it == parser.field_valid.end())
        return false;
    for (const auto& [path, disjunct] : it->second.variants) {
        auto r = detail::eval_bool(disjunct, buffer, &parser);
        if (r.ok() && *r)
            return true;
    }
    return false;
}

struct FieldSlice {
    std::uint64_t first = 0;
    std::uint64_t length = 0;
    std::optional<std::uint64_t> value;  // absent for opaque payload slices
};

/// The slice (first bit, bit length, decoded value for scalar fields) of the
/// first valid variant of `field`, in path order.
///
/// Precondition: field_valid(parser, field, buffer). Violations raise
/// ContractViolation; the check is always on.
inline FieldSlice field_access(const DerivedParser& parser, const FieldId& field,
                               const MessageBuffer& buffer) {
    detail::require_labeled(parser, buffer, "field_access");
    if (!field_valid(parser, field, buffer))
        throw ContractViolation("field_access: field '" + field.name() +
                                "' has not been validated for this buffer");
    auto it = parser.field_access.find(field);
    for (const Path& path : it->second.variants) {
        if (!detail::variant_valid_impl(parser, path, buffer))
            continue;
        const VariantAccessFunc& acc = parser.variant_access.at(path);
        auto first = detail::eval_arith(acc.first, buffer, &parser);
        auto length = detail::eval_arith(acc.length, buffer, &parser);
        if (!first.ok() || !length.ok())
            continue;  // cannot happen for a valid variant; stay total
        FieldSlice slice;
        slice.first = *first;
        slice.length = *length;
        const FieldType* t = parser.graph.field_type(field);
        if (t != nullptr && !is_opaque(*t)) {
            auto v = read_bits(buffer, slice.first, slice.length);
            if (v.ok())
                slice.value = *v;
        }
        return slice;
    }
    throw ContractViolation("field_access: no valid variant for field '" + field.name() + "'");
}

/// Whole-message acceptance: exactly one Initial-to-Final path must be fully
/// valid.
inline bool is_valid(const DerivedParser& parser, const MessageBuffer& buffer) {
    detail::require_labeled(parser, buffer, "is_valid");
    std::size_t valid_paths = 0;
    for (const Path& path : parser.final_paths)
        if (detail::variant_valid_impl(parser, path, buffer))
            ++valid_paths;
    return valid_paths == 1;
}

// ---------------------------------------------------------------------------
// Refinement checks

namespace detail {

/// Evaluates a refinement condition, which refers to outer-message fields
/// directly. References resolve through the field functions: a reference to
/// a field that is not valid on this buffer is an evaluation error, making
/// the condition false.
inline EvalResult<Value> eval_over_fields(const Expr& e, const DerivedParser& parser,
                                          const MessageBuffer& buffer) {
    using K = Expr::Kind;
    if (!e.valid())
        return EvalError::Internal;
    switch (e.kind()) {
    case K::FieldValue:
    case K::FieldFirst:
    case K::FieldLength: {
        if (!field_valid(parser, e.field(), buffer))
            return EvalError::Unsupported;
        FieldSlice s = field_access(parser, e.field(), buffer);
        if (e.kind() == K::FieldFirst)
            return Value{s.first};
        if (e.kind() == K::FieldLength)
            return Value{s.length};
        if (!s.value.has_value())
            return EvalError::Unsupported;  // opaque fields have no scalar value
        return Value{*s.value};
    }
    case K::Not: {
        auto v = eval_over_fields(e.operand(), parser, buffer);
        if (!v.ok())
            return v.error();
        if (!std::holds_alternative<bool>(*v))
            return EvalError::Internal;
        return Value{!std::get<bool>(*v)};
    }
    case K::Constant:
    case K::MessageLength:
    case K::MessageLast:
    case K::TrueLit:
    case K::FalseLit:
        return eval_impl(e, buffer, &parser);
    default: {
        // Rebuild strict/short-circuit semantics over field-resolving
        // recursion for the remaining binary operators.
        auto arith = [&](const Expr& sub) -> EvalResult<std::uint64_t> {
            auto r = eval_over_fields(sub, parser, buffer);
            if (!r.ok())
                return r.error();
            if (!std::holds_alternative<std::uint64_t>(*r))
                return EvalError::Internal;
            return std::get<std::uint64_t>(*r);
        };
        auto boolean = [&](const Expr& sub) -> EvalResult<bool> {
            auto r = eval_over_fields(sub, parser, buffer);
            if (!r.ok())
                return r.error();
            if (!std::holds_alternative<bool>(*r))
                return EvalError::Internal;
            return std::get<bool>(*r);
        };
        if (e.kind() == K::And || e.kind() == K::Or) {
            auto l = boolean(e.lhs());
            if (!l.ok())
                return l.error();
            if (e.kind() == K::And && !*l)
                return Value{false};
            if (e.kind() == K::Or && *l)
                return Value{true};
            auto r = boolean(e.rhs());
            if (!r.ok())
                return r.error();
            return Value{*r};
        }
        auto l = arith(e.lhs());
        if (!l.ok())
            return l.error();
        auto r = arith(e.rhs());
        if (!r.ok())
            return r.error();
        switch (e.kind()) {
        case K::Add: {
            auto v = num::checked_add(*l, *r);
            return v ? EvalResult<Value>{Value{*v}} : EvalError::Overflow;
        }
        case K::Sub: {
            auto v = num::checked_sub(*l, *r);
            return v ? EvalResult<Value>{Value{*v}} : EvalError::Underflow;
        }
        case K::Mul: {
            auto v = num::checked_mul(*l, *r);
            return v ? EvalResult<Value>{Value{*v}} : EvalError::Overflow;
        }
        case K::Div: {
            auto v = num::checked_div(*l, *r);
            return v ? EvalResult<Value>{Value{*v}} : EvalError::DivisionByZero;
        }
        case K::Eq: return Value{*l == *r};
        case K::Ne: return Value{*l != *r};
        case K::Le: return Value{*l <= *r};
        case K::Ge: return Value{*l >= *r};
        case K::Lt: return Value{*l < *r};
        case K::Gt: return Value{*l > *r};
        case K::Read: {
            auto v = read_bits(buffer, *l, *r);
            return v.ok() ? EvalResult<Value>{Value{*v}} : EvalResult<Value>{v.error()};
        }
        default:
            return EvalError::Internal;
        }
    }
    }
}

}  // namespace detail

/// Checks whether `buffer`, already validated as the refinement's outer
/// message, holds the refined inner message: if the refinement condition is
/// true over the outer fields, returns the payload slice as a new buffer
/// labeled with the inner message. The slice shares storage with the outer
/// buffer.
///
/// Preconditions (always checked): buffer labeled as the outer message and
/// is_valid; the payload slice must be byte-aligned.
inline std::optional<MessageBuffer> contains(const Refinement& refinement,
                                             const DerivedParser& outer_parser,
                                             const MessageBuffer& buffer) {
    if (ascii_lower(refinement.outer_message) != ascii_lower(outer_parser.graph.name()))
        throw ContractViolation("contains: refinement targets '" + refinement.outer_message +
                                "' but parser models '" + outer_parser.graph.name() + "'");
    detail::require_labeled(outer_parser, buffer, "contains");
    if (!is_valid(outer_parser, buffer))
        throw ContractViolation("contains: buffer has not been validated as '" +
                                refinement.outer_message + "'");

    auto cond = detail::eval_over_fields(refinement.condition, outer_parser, buffer);
    if (!cond.ok() || !std::holds_alternative<bool>(*cond) || !std::get<bool>(*cond))
        return std::nullopt;

    FieldSlice payload = field_access(outer_parser, refinement.payload_field, buffer);
    if (payload.first % 8 != 0 || payload.length % 8 != 0)
        throw ContractViolation("contains: payload slice of '" +
                                refinement.payload_field.name() + "' is not byte-aligned");
    return buffer.slice_bytes(static_cast<std::size_t>(payload.first / 8),
                              static_cast<std::size_t>(payload.length / 8),
                              refinement.inner_message);
}

}  // namespace rflx
