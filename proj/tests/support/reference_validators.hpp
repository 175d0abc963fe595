// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-written, straight-line validators for the bundled message formats.
// These are the independent oracles for the interpreter and the generated
// parsers: they share no code with the library and follow the wire formats
// directly (0-based bit positions, big-endian, a field occupies
// [first, first+length)).

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace reference {

inline std::uint64_t be16(const std::uint8_t* data, std::size_t offset) {
    return (static_cast<std::uint64_t>(data[offset]) << 8) | data[offset + 1];
}

// Ethernet.Frame: Destination(48) Source(48) then either
//   Type_Length(16) Payload                          (no VLAN tag)
//   TPID(16)=0x8100 TCI(16) Type_Length(16) Payload  (802.1Q)
// Type_Length <= 1500 gives a byte count for the payload (IEEE 802.3),
// >= 1536 means the payload runs to the end of the buffer (Ethernet II).
// The payload must be 46..1500 bytes. The Type_Length type excludes
// values below 46.
inline bool ethernet_frame_is_valid(const std::uint8_t* data, std::size_t size) {
    const std::uint64_t total_bits = 8 * static_cast<std::uint64_t>(size);
    if (total_bits < 112)
        return false;  // up to and including the Type_Length/TPID word
    const std::uint64_t tl_tpid = be16(data, 12);
    if (tl_tpid < 46)
        return false;  // declared range of the Type_Length type

    std::uint64_t type_length;
    std::uint64_t payload_first;
    if (tl_tpid == 0x8100) {
        if (total_bits < 144)
            return false;  // TPID + TCI + Type_Length must fit
        type_length = be16(data, 16);
        if (type_length < 46)
            return false;
        payload_first = 144;
    } else {
        type_length = tl_tpid;  // same bits: the tag word is an overlay
        payload_first = 112;
    }

    std::uint64_t payload_bits;
    if (type_length <= 1500) {
        payload_bits = type_length * 8;
        if (payload_first + payload_bits > total_bits)
            return false;
    } else if (type_length >= 1536) {
        payload_bits = total_bits - payload_first;
    } else {
        return false;  // 1501..1535 satisfies no successor condition
    }

    const std::uint64_t payload_bytes = payload_bits / 8;
    return payload_bytes >= 46 && payload_bytes <= 1500;
}

// TLS_Heartbeat.Heartbeat_Message: Message_Type(8) in {1,2},
// Payload_Length(16) <= 2**14 - 20, Payload of Payload_Length bytes,
// Padding to the end of the buffer. The whole message is capped at 2**14
// bytes and the padding must be at least 16 bytes.
inline bool heartbeat_message_is_valid(const std::uint8_t* data, std::size_t size) {
    const std::uint64_t total_bits = 8 * static_cast<std::uint64_t>(size);
    if (total_bits < 24)
        return false;
    const std::uint64_t message_type = data[0];
    if (message_type != 1 && message_type != 2)
        return false;
    const std::uint64_t payload_length = be16(data, 1);
    if (payload_length > 16364)
        return false;
    const std::uint64_t payload_bits = payload_length * 8;
    if (24 + payload_bits > total_bits)
        return false;
    const std::uint64_t padding_bits = total_bits - (24 + payload_bits);
    return total_bits <= 131072 && padding_bits >= 128;
}

// IPv4.Packet (simplified, as bundled): 20-byte header with Version_IHL
// pinned to 0x45, Total_Length in 20..65535 covering header plus payload,
// trailing bytes beyond Total_Length tolerated.
inline bool ipv4_packet_is_valid(const std::uint8_t* data, std::size_t size) {
    const std::uint64_t total_bits = 8 * static_cast<std::uint64_t>(size);
    if (total_bits < 160)
        return false;
    const std::uint64_t total_length = be16(data, 2);
    if (total_length < 20)
        return false;
    if (!(total_length * 8 <= total_bits && data[0] == 0x45))
        return false;
    return true;
}

inline bool ethernet_frame_is_valid(const std::vector<std::uint8_t>& b) {
    return ethernet_frame_is_valid(b.data(), b.size());
}
inline bool heartbeat_message_is_valid(const std::vector<std::uint8_t>& b) {
    return heartbeat_message_is_valid(b.data(), b.size());
}
inline bool ipv4_packet_is_valid(const std::vector<std::uint8_t>& b) {
    return ipv4_packet_is_valid(b.data(), b.size());
}

}  // namespace reference
