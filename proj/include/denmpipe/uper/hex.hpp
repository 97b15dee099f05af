#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "denmpipe/errors.hpp"
#include "denmpipe/uper/bits.hpp"

namespace denmpipe {

/// Uppercase hex, no separators. The inverse accepts either case and an
/// optional trailing newline.
inline std::string payload_to_hex(const UperPayload& payload) {
    static const char digits[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(payload.octets.size() * 2);
    for (std::uint8_t b : payload.octets) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

inline UperPayload hex_to_payload(const std::string& text) {
    std::string body = text;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r'))
        body.pop_back();
    if (body.size() % 2 != 0)
        throw Error(Errc::odd_length, "hex text has odd length " +
                                          std::to_string(body.size()));
    auto nibble = [&](std::size_t pos) -> std::uint8_t {
        const char c = body[pos];
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw Error(Errc::bad_hex_character,
                    std::string("character '") + c + "' at position " +
                        std::to_string(pos) + " is not a hex digit",
                    {}, static_cast<std::int64_t>(pos));
    };
    UperPayload payload;
    payload.octets.reserve(body.size() / 2);
    for (std::size_t i = 0; i < body.size(); i += 2)
        payload.octets.push_back(
            static_cast<std::uint8_t>((nibble(i) << 4) | nibble(i + 1)));
    payload.bit_length = payload.octets.size() * 8;
    return payload;
}

/// `.uper` file format: a single line of uppercase hex plus newline.
inline void write_uper_file(const std::string& path, const UperPayload& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::io_error, "cannot write '" + path + "'");
    out << payload_to_hex(payload) << '\n';
}

inline UperPayload read_uper_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::io_error, "cannot read '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return hex_to_payload(text);
}

}  // namespace denmpipe
