#include "denmpipe/uper/bits.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "denmpipe/uper/hex.hpp"

using namespace denmpipe;

namespace {

std::string bits_of(const UperPayload& p) {
    std::string out;
    for (std::size_t i = 0; i < p.bit_length; ++i)
        out.push_back((p.octets[i / 8] >> (7 - i % 8)) & 1u ? '1' : '0');
    return out;
}

}  // namespace

TEST(ConstrainedInt, ThreeInOctave) {
    BitSink sink;
    write_constrained_int(sink, 3, 0, 7);
    EXPECT_EQ(bits_of(sink.payload()), "011");
}

TEST(ConstrainedInt, SingletonRangeWritesNothing) {
    BitSink sink;
    write_constrained_int(sink, 5, 5, 5);
    EXPECT_EQ(sink.bit_length(), 0u);

    BitSource src(std::vector<std::uint8_t>{});
    EXPECT_EQ(read_constrained_int(src, 5, 5), 5);
}

TEST(ConstrainedInt, CauseValueNinetyIsEightBits) {
    BitSink sink;
    write_constrained_int(sink, 90, 0, 255);
    EXPECT_EQ(bits_of(sink.payload()), "01011010");
}

TEST(ConstrainedInt, ReadInverseOfWrite) {
    BitSink sink;
    write_constrained_int(sink, 3, 0, 7);
    BitSource src(sink.payload().octets);
    EXPECT_EQ(read_constrained_int(src, 0, 7), 3);
}

TEST(ConstrainedInt, RejectsValueOutsideRange) {
    BitSink sink;
    try {
        write_constrained_int(sink, 14, 1, 13);
        FAIL() << "expected OutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::out_of_range);
    }
}

TEST(ConstrainedInt, NonPowerOfTwoRangeRejectsHighOffsets) {
    // 4-bit pattern 1111 decodes to offset 15, past range size 13.
    BitSource src(std::vector<std::uint8_t>{0xF0});
    try {
        read_constrained_int(src, 1, 13);
        FAIL() << "expected DecodedOutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::decoded_out_of_range);
    }
}

TEST(ConstrainedInt, TruncatedSource) {
    BitSource src(std::vector<std::uint8_t>{0xAB});
    try {
        read_constrained_int(src, 0, 65535);  // needs 16 bits, has 8
        FAIL() << "expected Truncated";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::truncated);
    }
}

TEST(ConstrainedInt, WidthTable) {
    EXPECT_EQ(constrained_int_width(0, 7), 3u);
    EXPECT_EQ(constrained_int_width(5, 5), 0u);
    EXPECT_EQ(constrained_int_width(1, 13), 4u);
    EXPECT_EQ(constrained_int_width(0, 255), 8u);
    EXPECT_EQ(constrained_int_width(1, 255), 8u);
    EXPECT_EQ(constrained_int_width(0, 4294967295LL), 32u);
    EXPECT_EQ(constrained_int_width(0, 4398046511103LL), 42u);
    EXPECT_EQ(constrained_int_width(-900000000, 900000001), 31u);
    EXPECT_EQ(constrained_int_width(-1800000000, 1800000001), 32u);
    EXPECT_EQ(constrained_int_width(-100000, 800001), 20u);
    EXPECT_EQ(constrained_int_width(0, 86400), 17u);
}

TEST(SizedBitstring, LaneStatusLayout) {
    // length determinant 3-1=2 in 4 bits, then the three bits
    BitSink sink;
    write_sized_bitstring(sink, parse_lane_status("110"), 1, 13);
    EXPECT_EQ(bits_of(sink.payload()), "0010110");
}

TEST(SizedBitstring, MinimalLength) {
    BitSink sink;
    write_sized_bitstring(sink, parse_lane_status("1"), 1, 13);
    EXPECT_EQ(bits_of(sink.payload()), "00001");
}

TEST(SizedBitstring, RoundTrip) {
    for (const std::string& s : {"110", "1", "0000000000000", "1011011011011"}) {
        BitSink sink;
        write_sized_bitstring(sink, parse_lane_status(s), 1, 13);
        BitSource src(sink.payload().octets);
        EXPECT_EQ(read_sized_bitstring(src, 1, 13).to_string(), s);
    }
}

TEST(SizedBitstring, LengthOutOfRange) {
    LaneBits fourteen(0, 13);  // max representable; ask for 0..20 to overflow 13
    BitSink sink;
    try {
        write_sized_bitstring(sink, LaneBits(0x3FFF, 13), 1, 12);
        FAIL() << "expected LengthOutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::length_out_of_range);
    }
}

TEST(SizedBitstring, DecodedLengthOutOfRange) {
    // determinant 1110 = offset 14 > 12
    BitSource src(std::vector<std::uint8_t>{0xE0});
    try {
        read_sized_bitstring(src, 1, 13);
        FAIL() << "expected DecodedOutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::decoded_out_of_range);
    }
}

TEST(SizedBitstring, TruncatedBody) {
    // determinant says 13 bits follow, but only 4 remain
    BitSink sink;
    write_constrained_int(sink, 13, 1, 13);
    sink.write_bits(0xF, 4);
    BitSource src(sink.payload().octets);
    try {
        read_sized_bitstring(src, 1, 13);
        FAIL() << "expected Truncated";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::truncated);
    }
}

TEST(Primitives, RandomizedInversion) {
    std::mt19937_64 rng(0x5eed01);
    // range classes: tiny, byte, lane-count, large, signed, singleton
    const std::pair<std::int64_t, std::int64_t> classes[] = {
        {0, 1},       {0, 7},          {0, 255},          {1, 13},
        {1, 255},     {0, 65535},      {-100000, 800001}, {0, 4398046511103LL},
        {-5, -5},     {-900000000, 900000001},
    };
    for (const auto& [lb, ub] : classes) {
        std::uniform_int_distribution<std::int64_t> dist(lb, ub);
        for (int i = 0; i < 1000; ++i) {
            const std::int64_t value = dist(rng);
            BitSink sink;
            write_constrained_int(sink, value, lb, ub);
            EXPECT_EQ(sink.bit_length(), constrained_int_width(lb, ub));
            BitSource src(sink.payload().octets);
            ASSERT_EQ(read_constrained_int(src, lb, ub), value)
                << "range [" << lb << ", " << ub << "]";
        }
    }
}

TEST(Payload, PaddingBitsAreZero) {
    std::mt19937_64 rng(0x5eed02);
    for (int i = 0; i < 200; ++i) {
        BitSink sink;
        const unsigned n = 1 + static_cast<unsigned>(rng() % 50);
        for (unsigned b = 0; b < n; ++b) sink.write_bit(rng() & 1);
        const UperPayload p = sink.payload();
        EXPECT_EQ(p.octets.size(), (p.bit_length + 7) / 8);
        if (p.bit_length % 8 != 0) {
            const unsigned pad = 8 - p.bit_length % 8;
            EXPECT_EQ(p.octets.back() & ((1u << pad) - 1u), 0u);
        }
    }
}

TEST(Hex, RoundTripAndFormat) {
    UperPayload p;
    p.octets = {0x6B, 0x40, 0x00};
    p.bit_length = 24;
    EXPECT_EQ(payload_to_hex(p), "6B4000");
    EXPECT_EQ(hex_to_payload("6B4000").octets, p.octets);
    EXPECT_EQ(hex_to_payload("6b4000\n").octets, p.octets);
}

TEST(Hex, EmptyPayload) {
    EXPECT_TRUE(hex_to_payload("").octets.empty());
    EXPECT_EQ(payload_to_hex(UperPayload{}), "");
}

TEST(Hex, OddLengthRejected) {
    try {
        hex_to_payload("6B4");
        FAIL() << "expected OddLength";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::odd_length);
    }
}

TEST(Hex, BadCharacterCarriesPosition) {
    try {
        hex_to_payload("6B4G");
        FAIL() << "expected BadHexCharacter";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::bad_hex_character);
        EXPECT_EQ(e.detail(), 3);
    }
}
