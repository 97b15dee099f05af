#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "denmpipe/denm/types.hpp"

namespace denmpipe {

enum class SituationType { DENM, NONE };

inline const char* to_string(SituationType t) {
    return t == SituationType::DENM ? "DENM" : "NONE";
}

/// Normalized bounding box on a 0..1000 grid, Gemini-style coordinate
/// order (ymin, xmin, ymax, xmax).
struct BoxNorm {
    std::int64_t ymin = 0;
    std::int64_t xmin = 0;
    std::int64_t ymax = 0;
    std::int64_t xmax = 0;

    friend bool operator==(const BoxNorm&, const BoxNorm&) = default;
};

struct DetectionResult {
    SituationType situation_type = SituationType::NONE;
    std::string description;
    std::optional<BoxNorm> bbox_norm;  // present iff situation_type == DENM
    std::optional<std::string> confidence_note;

    friend bool operator==(const DetectionResult&, const DetectionResult&) = default;
};

/// Pixel-space box, half-open on neither axis: x0 < x1 <= width.
struct PixelBox {
    std::int64_t x0 = 0;
    std::int64_t y0 = 0;
    std::int64_t x1 = 0;
    std::int64_t y1 = 0;

    friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

/// Everything the message-generation stage extracts for one image, plus
/// the camera position injected from configuration.
struct RoadParams {
    GeoPosition camera_position;
    double distance_to_event_m = 0.0;
    std::int64_t number_of_lanes = 1;
    std::string driving_lane_status;
    std::int64_t cause_code = 0;
    std::int64_t sub_cause_code = 0;
    std::optional<std::int64_t> speed_limit_kmh;
    std::optional<TrafficFlowRule> traffic_flow_rule;

    friend bool operator==(const RoadParams&, const RoadParams&) = default;
};

}  // namespace denmpipe
