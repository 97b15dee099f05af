#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "denmpipe/errors.hpp"

namespace denmpipe {

/// Value form of a driving-lane-status bit string: up to 13 lanes, bit i
/// describing lane i+1 (lane 1 = outermost/rightmost). Bit value follows
/// the configured polarity; in the default convention 0 = closed, 1 = open.
class LaneBits {
public:
    LaneBits() = default;

    LaneBits(std::uint16_t bits, std::size_t length)
        : bits_(static_cast<std::uint16_t>(bits & mask(length))), length_(length) {}

    std::size_t length() const noexcept { return length_; }

    bool bit(std::size_t i) const { return (bits_ >> i) & 1u; }

    void set_bit(std::size_t i, bool v) {
        if (v)
            bits_ = static_cast<std::uint16_t>(bits_ | (1u << i));
        else
            bits_ = static_cast<std::uint16_t>(bits_ & ~(1u << i));
    }

    std::string to_string() const {
        std::string out(length_, '0');
        for (std::size_t i = 0; i < length_; ++i)
            if (bit(i)) out[i] = '1';
        return out;
    }

    LaneBits inverted() const {
        return LaneBits(static_cast<std::uint16_t>(~bits_), length_);
    }

    friend bool operator==(const LaneBits&, const LaneBits&) = default;

private:
    static std::uint16_t mask(std::size_t n) {
        return static_cast<std::uint16_t>((1u << n) - 1u);
    }

    std::uint16_t bits_ = 0;
    std::size_t length_ = 0;
};

/// Parses the textual lane-status convention: 1..13 characters, each '0'
/// or '1', character i becoming bit i. Errors carry the offending
/// position in detail().
inline LaneBits parse_lane_status(const std::string& text) {
    if (text.empty())
        throw Error(Errc::empty_input, "lane status must have at least one lane");
    if (text.size() > 13)
        throw Error(Errc::too_long,
                    "lane status has " + std::to_string(text.size()) +
                        " characters; at most 13 lanes are supported",
                    {}, static_cast<std::int64_t>(text.size()));
    LaneBits bits(0, text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1')
            bits.set_bit(i, true);
        else if (text[i] != '0')
            throw Error(Errc::non_binary_character,
                        std::string("character '") + text[i] + "' at index " +
                            std::to_string(i) + " is not '0' or '1'",
                        {}, static_cast<std::int64_t>(i));
    }
    return bits;
}

}  // namespace denmpipe
