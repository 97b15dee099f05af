#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "denmpipe/agents/types.hpp"
#include "denmpipe/denm/types.hpp"
#include "denmpipe/errors.hpp"

namespace denmpipe {

/// Knobs the message corpus never pins per-image; all configurable.
struct BuildOptions {
    std::int64_t validity_duration_s = 600;
    std::int64_t station_type = 15;  // roadsideUnit
    std::int64_t information_quality = 3;
    /// Paper convention keeps '0' = closed on the wire; the ETSI
    /// DrivingLaneStatus polarity (bit set = closed) inverts the bits.
    bool etsi_lane_polarity = false;
};

/// Composes the three-container message from a positive detection and the
/// extracted road parameters. detection_time == reference_time == now.
/// The produced message always passes strict validation.
inline Denm build_denm(const DetectionResult& detection, const RoadParams& params,
                       const GeoPosition& camera, std::int64_t station_id,
                       std::int64_t seq, std::int64_t now_its_ms,
                       const BuildOptions& options = {}) {
    if (detection.situation_type != SituationType::DENM)
        throw Error(Errc::precondition,
                    "build_denm requires a DENM detection, got NONE");
    if (params.driving_lane_status.empty())
        throw Error(Errc::incomplete_params, "driving_lane_status is empty",
                    "driving_lane_status");
    if (!std::isfinite(params.distance_to_event_m) || params.distance_to_event_m < 0)
        throw Error(Errc::incomplete_params,
                    "distance_to_event_m must be finite and non-negative",
                    "distance_to_event_m");

    Denm denm;
    denm.management.action_id = {station_id, seq};
    denm.management.detection_time_its_ms = now_its_ms;
    denm.management.reference_time_its_ms = now_its_ms;
    denm.management.event_position = camera;
    denm.management.validity_duration_s = options.validity_duration_s;
    denm.management.station_type = options.station_type;

    denm.situation = SituationContainer{options.information_quality,
                                        params.cause_code, params.sub_cause_code};

    AlacarteContainer ala;
    ala.number_of_lanes = params.number_of_lanes;
    ala.driving_lane_status = params.driving_lane_status;
    if (options.etsi_lane_polarity) {
        for (char& c : ala.driving_lane_status) c = (c == '0') ? '1' : '0';
    }
    // meters -> decimeters, saturating at the field maximum
    const double dm = std::round(params.distance_to_event_m * 10.0);
    ala.distance_to_event_dm = dm > static_cast<double>(limits::distance_dm_max)
                                   ? limits::distance_dm_max
                                   : static_cast<std::int64_t>(dm);
    ala.speed_limit_kmh = params.speed_limit_kmh;
    ala.traffic_flow_rule = params.traffic_flow_rule;
    denm.alacarte = std::move(ala);
    return denm;
}

}  // namespace denmpipe
