#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "denmpipe/denm/lane_status.hpp"
#include "denmpipe/errors.hpp"

namespace denmpipe {

struct UperPayload {
    std::vector<std::uint8_t> octets;
    std::size_t bit_length = 0;  // exact encoded bit count before padding

    friend bool operator==(const UperPayload&, const UperPayload&) = default;
};

/// Number of bits an unaligned constrained whole number in [lb, ub]
/// occupies: ceil(log2(ub - lb + 1)), zero for a singleton range.
inline unsigned constrained_int_width(std::int64_t lb, std::int64_t ub) {
    const std::uint64_t span = static_cast<std::uint64_t>(ub - lb);
    return span == 0 ? 0u : static_cast<unsigned>(std::bit_width(span));
}

/// Growable MSB-first bit buffer. Byte rendering pads the final byte
/// with zero bits.
class BitSink {
public:
    void write_bit(bool bit) {
        const std::size_t byte = bit_length_ / 8;
        if (byte == bytes_.size()) bytes_.push_back(0);
        if (bit) bytes_[byte] |= static_cast<std::uint8_t>(0x80u >> (bit_length_ % 8));
        ++bit_length_;
    }

    void write_bits(std::uint64_t value, unsigned width) {
        for (unsigned i = width; i-- > 0;)
            write_bit((value >> i) & 1u);
    }

    std::size_t bit_length() const noexcept { return bit_length_; }

    UperPayload payload() const { return {bytes_, bit_length_}; }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bit_length_ = 0;
};

/// MSB-first cursor over input octets; reads never pass the end.
class BitSource {
public:
    explicit BitSource(std::vector<std::uint8_t> bytes)
        : bytes_(std::move(bytes)) {}

    std::size_t bits_total() const noexcept { return bytes_.size() * 8; }
    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t bits_remaining() const noexcept { return bits_total() - cursor_; }

    bool read_bit() {
        if (cursor_ >= bits_total())
            throw Error(Errc::truncated, "read past end of payload at bit " +
                                             std::to_string(cursor_));
        const bool bit =
            (bytes_[cursor_ / 8] >> (7 - cursor_ % 8)) & 1u;
        ++cursor_;
        return bit;
    }

    std::uint64_t read_bits(unsigned width) {
        if (width > bits_remaining())
            throw Error(Errc::truncated,
                        "need " + std::to_string(width) + " bits, only " +
                            std::to_string(bits_remaining()) + " remaining");
        std::uint64_t value = 0;
        for (unsigned i = 0; i < width; ++i)
            value = (value << 1) | (read_bit() ? 1u : 0u);
        return value;
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t cursor_ = 0;
};

/// Appends (value - lb) as a big-endian unsigned of exactly
/// constrained_int_width(lb, ub) bits; a singleton range appends nothing.
inline void write_constrained_int(BitSink& sink, std::int64_t value,
                                  std::int64_t lb, std::int64_t ub) {
    if (value < lb || value > ub)
        throw Error(Errc::out_of_range,
                    std::to_string(value) + " outside [" + std::to_string(lb) +
                        ", " + std::to_string(ub) + "]");
    sink.write_bits(static_cast<std::uint64_t>(value - lb),
                    constrained_int_width(lb, ub));
}

/// Exact inverse of write_constrained_int. When the range size is not a
/// power of two, some bit patterns decode to an offset past ub - lb;
/// those are rejected as DecodedOutOfRange.
inline std::int64_t read_constrained_int(BitSource& src, std::int64_t lb,
                                         std::int64_t ub) {
    const unsigned width = constrained_int_width(lb, ub);
    const std::uint64_t offset = src.read_bits(width);
    if (offset > static_cast<std::uint64_t>(ub - lb))
        throw Error(Errc::decoded_out_of_range,
                    "decoded offset " + std::to_string(offset) +
                        " exceeds range size " + std::to_string(ub - lb + 1));
    return lb + static_cast<std::int64_t>(offset);
}

/// Writes a length-prefixed bit string: the length as a constrained int
/// in [min_len, max_len], then the bits in order (bit 0 first).
inline void write_sized_bitstring(BitSink& sink, const LaneBits& bits,
                                  std::int64_t min_len, std::int64_t max_len) {
    const auto len = static_cast<std::int64_t>(bits.length());
    if (len < min_len || len > max_len)
        throw Error(Errc::length_out_of_range,
                    "bit string length " + std::to_string(len) + " outside [" +
                        std::to_string(min_len) + ", " + std::to_string(max_len) +
                        "]");
    write_constrained_int(sink, len, min_len, max_len);
    for (std::size_t i = 0; i < bits.length(); ++i)
        sink.write_bit(bits.bit(i));
}

inline LaneBits read_sized_bitstring(BitSource& src, std::int64_t min_len,
                                     std::int64_t max_len) {
    const std::int64_t len = read_constrained_int(src, min_len, max_len);
    LaneBits bits(0, static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i)
        bits.set_bit(static_cast<std::size_t>(i), src.read_bit());
    return bits;
}

}  // namespace denmpipe
