#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "denmpipe/errors.hpp"

namespace denmpipe {

// Closed ranges of the DENM subset carried on the wire. Latitude/longitude
// are in 1e-7 degrees, altitude in centimeters, timestamps in milliseconds
// since the ITS epoch (2004-01-01T00:00:00Z). The maximum value of each
// position component is the "unavailable" sentinel.
namespace limits {
inline constexpr std::int64_t station_id_max = 4294967295;
inline constexpr std::int64_t sequence_number_max = 65535;
inline constexpr std::int64_t its_time_max = 4398046511103;  // 2^42 - 1
inline constexpr std::int64_t latitude_min = -900000000;
inline constexpr std::int64_t latitude_max = 900000001;
inline constexpr std::int64_t longitude_min = -1800000000;
inline constexpr std::int64_t longitude_max = 1800000001;
inline constexpr std::int64_t altitude_cm_min = -100000;
inline constexpr std::int64_t altitude_cm_max = 800001;
inline constexpr std::int64_t validity_duration_max = 86400;
inline constexpr std::int64_t station_type_max = 255;
inline constexpr std::int64_t information_quality_max = 7;
inline constexpr std::int64_t cause_code_max = 255;
inline constexpr std::int64_t lanes_min = 1;
inline constexpr std::int64_t lanes_max = 13;
inline constexpr std::int64_t distance_dm_max = 65535;
inline constexpr std::int64_t speed_min = 1;
inline constexpr std::int64_t speed_max = 255;
}  // namespace limits

struct ActionId {
    std::int64_t originating_station_id = 0;  // 0..4294967295
    std::int64_t sequence_number = 0;         // 0..65535

    friend bool operator==(const ActionId&, const ActionId&) = default;
};

struct GeoPosition {
    std::int64_t latitude = limits::latitude_max;    // 1e-7 deg, max = unavailable
    std::int64_t longitude = limits::longitude_max;  // 1e-7 deg, max = unavailable
    std::int64_t altitude_cm = limits::altitude_cm_max;

    friend bool operator==(const GeoPosition&, const GeoPosition&) = default;
};

struct ManagementContainer {
    ActionId action_id;
    std::int64_t detection_time_its_ms = 0;
    std::int64_t reference_time_its_ms = 0;
    GeoPosition event_position;
    std::optional<std::int64_t> validity_duration_s;  // seconds, 0..86400
    std::int64_t station_type = 0;

    friend bool operator==(const ManagementContainer&,
                           const ManagementContainer&) = default;
};

struct SituationContainer {
    std::int64_t information_quality = 0;  // 0..7
    std::int64_t cause_code = 0;           // 0..255
    std::int64_t sub_cause_code = 0;       // 0..255

    friend bool operator==(const SituationContainer&,
                           const SituationContainer&) = default;
};

enum class TrafficFlowRule {
    no_passing = 0,
    no_passing_for_trucks = 1,
    pass_to_left = 2,
    pass_to_right = 3,
};

inline const char* to_string(TrafficFlowRule r) {
    switch (r) {
        case TrafficFlowRule::no_passing: return "no_passing";
        case TrafficFlowRule::no_passing_for_trucks: return "no_passing_for_trucks";
        case TrafficFlowRule::pass_to_left: return "pass_to_left";
        case TrafficFlowRule::pass_to_right: return "pass_to_right";
    }
    return "no_passing";
}

inline TrafficFlowRule traffic_flow_rule_from_string(const std::string& s) {
    if (s == "no_passing") return TrafficFlowRule::no_passing;
    if (s == "no_passing_for_trucks") return TrafficFlowRule::no_passing_for_trucks;
    if (s == "pass_to_left") return TrafficFlowRule::pass_to_left;
    if (s == "pass_to_right") return TrafficFlowRule::pass_to_right;
    throw Error(Errc::bad_format, "unknown traffic_flow_rule '" + s + "'",
                "traffic_flow_rule");
}

// driving_lane_status is kept as its textual bit-string form ('0'/'1',
// lane 1 = rightmost at index 0, '0' = closed) so that range-violating
// candidates survive deserialization long enough to be reported by the
// validator instead of aborting.
struct AlacarteContainer {
    std::int64_t number_of_lanes = 1;  // 1..13
    std::string driving_lane_status;   // length 1..13, must equal number_of_lanes
    std::optional<std::int64_t> distance_to_event_dm;  // decimeters, 0..65535
    std::optional<std::int64_t> speed_limit_kmh;       // 1..255
    std::optional<TrafficFlowRule> traffic_flow_rule;

    friend bool operator==(const AlacarteContainer&,
                           const AlacarteContainer&) = default;
};

struct Denm {
    ManagementContainer management;
    std::optional<SituationContainer> situation;
    std::optional<AlacarteContainer> alacarte;

    friend bool operator==(const Denm&, const Denm&) = default;
};

}  // namespace denmpipe
