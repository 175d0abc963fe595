// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include "rflx/expr.hpp"

using namespace rflx;

namespace {
const FieldId type_length = FieldId::named("Type_Length");
}

TEST_CASE("sort checking accepts arithmetic over known fields") {
    Expr e = Expr::mul(Expr::field_value(type_length), Expr::constant(8));
    auto r = type_check(e, {type_length});
    REQUIRE(std::holds_alternative<Sort>(r));
    CHECK(std::get<Sort>(r) == Sort::Arithmetic);
}

TEST_CASE("sort checking of literals") {
    auto r = type_check(Expr::true_lit(), {});
    REQUIRE(std::holds_alternative<Sort>(r));
    CHECK(std::get<Sort>(r) == Sort::Boolean);
}

TEST_CASE("sort mismatch is reported with the offending node") {
    Expr bad = Expr::logical_and(Expr::constant(1), Expr::true_lit());
    auto r = type_check(bad, {});
    REQUIRE(std::holds_alternative<TypeError>(r));
    CHECK(std::get<TypeError>(r).offending == bad);
}

TEST_CASE("references to unknown fields are sort errors") {
    Expr e = Expr::field_first(FieldId::named("Missing"));
    auto r = type_check(e, {type_length});
    REQUIRE(std::holds_alternative<TypeError>(r));
    CHECK(std::get<TypeError>(r).message.find("Missing") != std::string::npos);
}

TEST_CASE("relations require arithmetic operands and produce booleans") {
    Expr rel = Expr::le(Expr::field_value(type_length), Expr::constant(1500));
    auto r = type_check(rel, {type_length});
    REQUIRE(std::holds_alternative<Sort>(r));
    CHECK(std::get<Sort>(r) == Sort::Boolean);

    Expr bad = Expr::le(Expr::true_lit(), Expr::constant(1));
    CHECK(std::holds_alternative<TypeError>(type_check(bad, {})));

    Expr bad_not = Expr::logical_not(Expr::constant(1));
    CHECK(std::holds_alternative<TypeError>(type_check(bad_not, {})));
}

TEST_CASE("folding evaluates constant subterms") {
    Expr e = Expr::sub(Expr::constant(65536), Expr::constant(1));
    CHECK(fold(e) == Expr::constant(65535));

    Expr nested = Expr::mul(Expr::add(Expr::constant(2), Expr::constant(3)), Expr::constant(8));
    CHECK(fold(nested) == Expr::constant(40));

    Expr rel = Expr::le(Expr::constant(46), Expr::constant(1500));
    CHECK(fold(rel) == Expr::true_lit());
}

TEST_CASE("folding preserves failing operations for runtime detection") {
    Expr underflow = Expr::sub(Expr::constant(3), Expr::constant(5));
    CHECK(fold(underflow) == underflow);

    Expr div0 = Expr::div(Expr::constant(1), Expr::constant(0));
    CHECK(fold(div0) == div0);

    Expr overflow = Expr::mul(Expr::constant(UINT64_MAX), Expr::constant(2));
    CHECK(fold(overflow) == overflow);
}

TEST_CASE("folding simplifies boolean identities without changing semantics") {
    Expr x = Expr::le(Expr::message_length(), Expr::constant(100));
    CHECK(fold(Expr::logical_and(Expr::true_lit(), x)) == x);
    CHECK(fold(Expr::logical_and(Expr::false_lit(), x)) == Expr::false_lit());
    CHECK(fold(Expr::logical_or(Expr::true_lit(), x)) == Expr::true_lit());
    CHECK(fold(Expr::logical_or(Expr::false_lit(), x)) == x);
    CHECK(fold(Expr::logical_not(Expr::true_lit())) == Expr::false_lit());
}

TEST_CASE("checked arithmetic helpers") {
    CHECK(num::checked_add(2, 3) == 5);
    CHECK_FALSE(num::checked_add(UINT64_MAX, 1).has_value());
    CHECK(num::checked_sub(5, 5) == 0);
    CHECK_FALSE(num::checked_sub(3, 5).has_value());
    CHECK(num::checked_mul(1u << 20, 1u << 20) == (std::uint64_t{1} << 40));
    CHECK_FALSE(num::checked_mul(std::uint64_t{1} << 33, std::uint64_t{1} << 33).has_value());
    CHECK(num::checked_div(7, 2) == 3);
    CHECK_FALSE(num::checked_div(7, 0).has_value());
    CHECK(num::checked_pow(2, 48) == (std::uint64_t{1} << 48));
    CHECK_FALSE(num::checked_pow(2, 64).has_value());
    CHECK(num::checked_pow(17, 0) == 1);
}

TEST_CASE("structural equality distinguishes shape and payload") {
    Expr a = Expr::add(Expr::field_first(type_length), Expr::field_length(type_length));
    Expr b = Expr::add(Expr::field_first(type_length), Expr::field_length(type_length));
    CHECK(a == b);
    CHECK(a != Expr::add(Expr::field_length(type_length), Expr::field_first(type_length)));
    CHECK(Expr::constant(1) != Expr::constant(2));
    CHECK(Expr::variant_call({0, 1}) == Expr::variant_call({0, 1}));
    CHECK(Expr::variant_call({0, 1}) != Expr::variant_call({0, 2}));
}

TEST_CASE("field identifiers compare case-insensitively, display as written") {
    FieldId a = FieldId::named("Payload_Length");
    FieldId b = FieldId::named("PAYLOAD_LENGTH");
    CHECK(a == b);
    CHECK_FALSE(a < b);
    CHECK_FALSE(b < a);
    CHECK(a.name() == "Payload_Length");
    CHECK(FieldId::initial() != FieldId::final());
    CHECK(FieldId::initial() != FieldId::named("Initial"));
}

TEST_CASE("printer renders surface syntax with minimal parentheses") {
    CHECK(to_string(Expr::mul(Expr::field_value(type_length), Expr::constant(8))) ==
          "Type_Length * 8");
    CHECK(to_string(Expr::sub(Expr::message_last(), Expr::field_last(type_length))) ==
          "Message'Last - Type_Length'Last");
    Expr cond = Expr::logical_and(
        Expr::ge(Expr::div(Expr::field_length(FieldId::named("Payload")), Expr::constant(8)),
                 Expr::constant(46)),
        Expr::le(Expr::div(Expr::field_length(FieldId::named("Payload")), Expr::constant(8)),
                 Expr::constant(1500)));
    CHECK(to_string(cond) == "Payload'Length / 8 >= 46 and Payload'Length / 8 <= 1500");
    // Non-associative operators parenthesize their right side.
    CHECK(to_string(Expr::sub(Expr::constant(10),
                              Expr::sub(Expr::constant(5), Expr::constant(2)))) ==
          "10 - (5 - 2)");
    CHECK(to_string(Expr::logical_or(
              Expr::true_lit(), Expr::logical_and(Expr::false_lit(), Expr::true_lit()))) ==
          "True or False and True");
}

TEST_CASE("reference collection sees every field constructor") {
    Expr e = Expr::logical_and(
        Expr::eq(Expr::field_value(FieldId::named("A")), Expr::constant(1)),
        Expr::le(Expr::add(Expr::field_first(FieldId::named("B")),
                           Expr::field_length(FieldId::named("C"))),
                 Expr::message_length()));
    auto refs = references(e);
    CHECK(refs.size() == 3);
    CHECK(refs.count(FieldId::named("a")) == 1);
    CHECK(contains_field_reference(e));
    CHECK_FALSE(contains_field_reference(Expr::read(Expr::constant(0), Expr::constant(8))));
}
