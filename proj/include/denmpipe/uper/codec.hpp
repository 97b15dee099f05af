#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "denmpipe/denm/lane_status.hpp"
#include "denmpipe/denm/types.hpp"
#include "denmpipe/denm/validate.hpp"
#include "denmpipe/errors.hpp"
#include "denmpipe/uper/bits.hpp"

namespace denmpipe {

class InvalidMessageError : public Error {
public:
    explicit InvalidMessageError(ValidationReport report)
        : Error(Errc::invalid_message,
                "message failed validation with " +
                    std::to_string(report.violations.size()) + " violation(s)" +
                    (report.violations.empty()
                         ? std::string{}
                         : "; first: " + report.violations.front().path + " (" +
                               report.violations.front().message + ")")),
          report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

// Wire layout (see docs/wire-format.md for the field/width table):
//   preamble          2 bits   situation-present, alacarte-present
//   management
//     validity flag   1 bit
//     station id      32       0..4294967295
//     sequence        16       0..65535
//     detection time  42       0..2^42-1 ms
//     reference time  42
//     latitude        31       offset from -900000000
//     longitude       32       offset from -1800000000
//     altitude        20       offset from -100000
//     validity        17       0..86400, only if flagged
//     station type    8
//   situation (if present)
//     quality 3, cause 8, sub-cause 8
//   alacarte (if present)
//     optional flags  3 bits   distance, speed, flow-rule
//     lanes           4        offset from 1
//     lane status     4 + n    length determinant over 1..13, then bits
//     distance        16       if flagged
//     speed           8        offset from 1, if flagged
//     flow rule       2        if flagged
// Final byte is zero-padded. No extension markers anywhere.

namespace wire {

inline void encode_management(BitSink& sink, const ManagementContainer& m) {
    using namespace limits;
    sink.write_bit(m.validity_duration_s.has_value());
    write_constrained_int(sink, m.action_id.originating_station_id, 0, station_id_max);
    write_constrained_int(sink, m.action_id.sequence_number, 0, sequence_number_max);
    write_constrained_int(sink, m.detection_time_its_ms, 0, its_time_max);
    write_constrained_int(sink, m.reference_time_its_ms, 0, its_time_max);
    write_constrained_int(sink, m.event_position.latitude, latitude_min, latitude_max);
    write_constrained_int(sink, m.event_position.longitude, longitude_min, longitude_max);
    write_constrained_int(sink, m.event_position.altitude_cm, altitude_cm_min,
                          altitude_cm_max);
    if (m.validity_duration_s)
        write_constrained_int(sink, *m.validity_duration_s, 0, validity_duration_max);
    write_constrained_int(sink, m.station_type, 0, station_type_max);
}

inline void encode_situation(BitSink& sink, const SituationContainer& s) {
    using namespace limits;
    write_constrained_int(sink, s.information_quality, 0, information_quality_max);
    write_constrained_int(sink, s.cause_code, 0, cause_code_max);
    write_constrained_int(sink, s.sub_cause_code, 0, cause_code_max);
}

inline void encode_alacarte(BitSink& sink, const AlacarteContainer& a) {
    using namespace limits;
    sink.write_bit(a.distance_to_event_dm.has_value());
    sink.write_bit(a.speed_limit_kmh.has_value());
    sink.write_bit(a.traffic_flow_rule.has_value());
    write_constrained_int(sink, a.number_of_lanes, lanes_min, lanes_max);
    write_sized_bitstring(sink, parse_lane_status(a.driving_lane_status),
                          lanes_min, lanes_max);
    if (a.distance_to_event_dm)
        write_constrained_int(sink, *a.distance_to_event_dm, 0, distance_dm_max);
    if (a.speed_limit_kmh)
        write_constrained_int(sink, *a.speed_limit_kmh, speed_min, speed_max);
    if (a.traffic_flow_rule)
        write_constrained_int(sink, static_cast<std::int64_t>(*a.traffic_flow_rule),
                              0, 3);
}

// Reader that tags codec errors with the field being decoded.
class FieldReader {
public:
    explicit FieldReader(BitSource& src) : src_(src) {}

    std::int64_t read(const char* field, std::int64_t lb, std::int64_t ub) {
        try {
            return read_constrained_int(src_, lb, ub);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(field) + ": " + e.message(), field,
                        e.detail());
        }
    }

    bool read_flag(const char* field) {
        try {
            return src_.read_bit();
        } catch (const Error& e) {
            throw Error(e.code(), std::string(field) + ": " + e.message(), field,
                        e.detail());
        }
    }

    LaneBits read_bitstring(const char* field, std::int64_t min_len,
                            std::int64_t max_len) {
        try {
            return read_sized_bitstring(src_, min_len, max_len);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(field) + ": " + e.message(), field,
                        e.detail());
        }
    }

private:
    BitSource& src_;
};

inline ManagementContainer decode_management(FieldReader& r) {
    using namespace limits;
    ManagementContainer m;
    const bool has_validity = r.read_flag("management.validity_duration_s.flag");
    m.action_id.originating_station_id =
        r.read("management.action_id.originating_station_id", 0, station_id_max);
    m.action_id.sequence_number =
        r.read("management.action_id.sequence_number", 0, sequence_number_max);
    m.detection_time_its_ms =
        r.read("management.detection_time_its_ms", 0, its_time_max);
    m.reference_time_its_ms =
        r.read("management.reference_time_its_ms", 0, its_time_max);
    m.event_position.latitude =
        r.read("management.event_position.latitude", latitude_min, latitude_max);
    m.event_position.longitude =
        r.read("management.event_position.longitude", longitude_min, longitude_max);
    m.event_position.altitude_cm = r.read("management.event_position.altitude_cm",
                                          altitude_cm_min, altitude_cm_max);
    if (has_validity)
        m.validity_duration_s =
            r.read("management.validity_duration_s", 0, validity_duration_max);
    m.station_type = r.read("management.station_type", 0, station_type_max);
    return m;
}

inline SituationContainer decode_situation(FieldReader& r) {
    using namespace limits;
    SituationContainer s;
    s.information_quality =
        r.read("situation.information_quality", 0, information_quality_max);
    s.cause_code = r.read("situation.cause_code", 0, cause_code_max);
    s.sub_cause_code = r.read("situation.sub_cause_code", 0, cause_code_max);
    return s;
}

inline AlacarteContainer decode_alacarte(FieldReader& r) {
    using namespace limits;
    AlacarteContainer a;
    const bool has_distance = r.read_flag("alacarte.distance_to_event_dm.flag");
    const bool has_speed = r.read_flag("alacarte.speed_limit_kmh.flag");
    const bool has_flow = r.read_flag("alacarte.traffic_flow_rule.flag");
    a.number_of_lanes = r.read("alacarte.number_of_lanes", lanes_min, lanes_max);
    a.driving_lane_status =
        r.read_bitstring("alacarte.driving_lane_status", lanes_min, lanes_max)
            .to_string();
    if (has_distance)
        a.distance_to_event_dm =
            r.read("alacarte.distance_to_event_dm", 0, distance_dm_max);
    if (has_speed)
        a.speed_limit_kmh = r.read("alacarte.speed_limit_kmh", speed_min, speed_max);
    if (has_flow)
        a.traffic_flow_rule = static_cast<TrafficFlowRule>(
            r.read("alacarte.traffic_flow_rule", 0, 3));
    return a;
}

}  // namespace wire

/// Deterministic bit-exact encoding of the DENM subset. The message must
/// pass non-strict validation; violations are reported via
/// InvalidMessageError rather than producing undefined bits.
inline UperPayload encode_denm(const Denm& denm) {
    ValidationReport report = validate_denm(denm, /*strict=*/false);
    if (!report.valid) throw InvalidMessageError(std::move(report));

    BitSink sink;
    sink.write_bit(denm.situation.has_value());
    sink.write_bit(denm.alacarte.has_value());
    wire::encode_management(sink, denm.management);
    if (denm.situation) wire::encode_situation(sink, *denm.situation);
    if (denm.alacarte) wire::encode_alacarte(sink, *denm.alacarte);
    return sink.payload();
}

/// Exact inverse of encode_denm. Strict: trailing padding must be fewer
/// than eight bits and all zero, so every message has a unique byte form.
inline Denm decode_denm(const std::vector<std::uint8_t>& octets) {
    BitSource src(octets);
    wire::FieldReader reader(src);

    Denm denm;
    const bool has_situation = reader.read_flag("preamble.situation");
    const bool has_alacarte = reader.read_flag("preamble.alacarte");
    denm.management = wire::decode_management(reader);
    if (has_situation) denm.situation = wire::decode_situation(reader);
    if (has_alacarte) denm.alacarte = wire::decode_alacarte(reader);

    const std::size_t trailing = src.bits_remaining();
    if (trailing >= 8)
        throw Error(Errc::nonzero_padding,
                    std::to_string(trailing) +
                        " trailing bits; at most 7 zero padding bits allowed");
    for (std::size_t i = 0; i < trailing; ++i)
        if (src.read_bit())
            throw Error(Errc::nonzero_padding, "padding bit " + std::to_string(i) +
                                                   " of final byte is set");
    return denm;
}

inline Denm decode_denm(const UperPayload& payload) {
    return decode_denm(payload.octets);
}

/// Bit widths summed from the layout table without running the encoder;
/// used to cross-check encoded bit lengths.
inline std::size_t expected_bit_length(const Denm& denm) {
    std::size_t bits = 2;  // preamble
    bits += 1 + 32 + 16 + 42 + 42 + 31 + 32 + 20 + 8;
    if (denm.management.validity_duration_s) bits += 17;
    if (denm.situation) bits += 3 + 8 + 8;
    if (denm.alacarte) {
        bits += 3 + 4 + 4 + denm.alacarte->driving_lane_status.size();
        if (denm.alacarte->distance_to_event_dm) bits += 16;
        if (denm.alacarte->speed_limit_kmh) bits += 8;
        if (denm.alacarte->traffic_flow_rule) bits += 2;
    }
    return bits;
}

}  // namespace denmpipe
