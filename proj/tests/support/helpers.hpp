// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rflx/rflx.hpp"

namespace testsupport {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::uint8_t> slurp_bytes(const std::string& path) {
    std::string text = slurp(path);
    return std::vector<std::uint8_t>(text.begin(), text.end());
}

inline std::string spec_path(const std::string& name) {
    return std::string(RFLX_SPEC_DIR) + "/" + name;
}

inline std::string vector_dir(const std::string& name) {
    return std::string(RFLX_VECTOR_DIR) + "/" + name;
}

inline rflx::dsl::SpecFile parse_file(const std::string& path) {
    auto parsed = rflx::dsl::parse_spec(slurp(path));
    if (const auto* errs = std::get_if<std::vector<rflx::dsl::SyntaxError>>(&parsed)) {
        std::string what = "parse failed for " + path + ":";
        for (const auto& e : *errs)
            what += "\n  " + std::to_string(e.loc.line) + ":" + std::to_string(e.loc.column) +
                    ": " + e.message;
        throw std::runtime_error(what);
    }
    return std::get<rflx::dsl::SpecFile>(std::move(parsed));
}

inline rflx::dsl::ElaboratedPackage elaborate_file(
    const std::string& path, const std::vector<rflx::MessageGraph>& external = {}) {
    auto elaborated = rflx::dsl::elaborate(parse_file(path), external);
    if (const auto* errs =
            std::get_if<std::vector<rflx::dsl::ElaborationError>>(&elaborated)) {
        std::string what = "elaboration failed for " + path + ":";
        for (const auto& e : *errs)
            what += "\n  " + std::to_string(e.loc.line) + ": " + e.message;
        throw std::runtime_error(what);
    }
    return std::get<rflx::dsl::ElaboratedPackage>(std::move(elaborated));
}

inline rflx::MessageGraph load_graph(const std::string& spec_file_name) {
    auto pkg = elaborate_file(spec_path(spec_file_name));
    if (pkg.messages.empty())
        throw std::runtime_error(spec_file_name + " declares no messages");
    return pkg.messages.front();
}

inline rflx::DerivedParser load_parser(const std::string& spec_file_name) {
    return rflx::derive_parser(load_graph(spec_file_name));
}

inline rflx::FieldId field(const std::string& name) { return rflx::FieldId::named(name); }

// -- frame builders for the bundled formats --------------------------------

inline std::vector<std::uint8_t> ethernet_ii_frame(std::uint16_t ether_type,
                                                   std::size_t payload_bytes,
                                                   std::uint8_t fill = 0xAA) {
    std::vector<std::uint8_t> f;
    for (int i = 0; i < 6; ++i)
        f.push_back(0xFF);
    f.insert(f.end(), {0x02, 0x00, 0x00, 0x00, 0x00, 0x01});
    f.push_back(static_cast<std::uint8_t>(ether_type >> 8));
    f.push_back(static_cast<std::uint8_t>(ether_type & 0xFF));
    f.insert(f.end(), payload_bytes, fill);
    return f;
}

inline std::vector<std::uint8_t> vlan_frame(std::uint16_t tci, std::uint16_t ether_type,
                                            std::size_t payload_bytes) {
    std::vector<std::uint8_t> f;
    for (int i = 0; i < 6; ++i)
        f.push_back(0xFF);
    f.insert(f.end(), {0x02, 0x00, 0x00, 0x00, 0x00, 0x01});
    f.push_back(0x81);
    f.push_back(0x00);
    f.push_back(static_cast<std::uint8_t>(tci >> 8));
    f.push_back(static_cast<std::uint8_t>(tci & 0xFF));
    f.push_back(static_cast<std::uint8_t>(ether_type >> 8));
    f.push_back(static_cast<std::uint8_t>(ether_type & 0xFF));
    f.insert(f.end(), payload_bytes, 0xAA);
    return f;
}

inline std::vector<std::uint8_t> heartbeat_message(std::uint8_t type,
                                                   std::uint16_t declared_length,
                                                   std::size_t payload_bytes,
                                                   std::size_t padding_bytes) {
    std::vector<std::uint8_t> m{type, static_cast<std::uint8_t>(declared_length >> 8),
                                static_cast<std::uint8_t>(declared_length & 0xFF)};
    m.insert(m.end(), payload_bytes, 0x42);
    m.insert(m.end(), padding_bytes, 0x00);
    return m;
}

}  // namespace testsupport
