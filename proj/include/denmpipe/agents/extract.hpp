#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "denmpipe/agents/detect.hpp"
#include "denmpipe/agents/image.hpp"
#include "denmpipe/agents/types.hpp"
#include "denmpipe/denm/lane_status.hpp"
#include "denmpipe/providers/model.hpp"
#include "denmpipe/providers/structured.hpp"

namespace denmpipe {

struct ExtractOptions {
    /// With strict ranges on, an out-of-range field raises
    /// FieldOutOfRange instead of being clamped into its range.
    bool strict_ranges = false;
};

namespace detail {

inline std::int64_t clamp_or_throw(std::int64_t value, std::int64_t lo,
                                   std::int64_t hi, const char* field,
                                   bool strict) {
    if (value >= lo && value <= hi) return value;
    if (strict)
        throw Error(Errc::field_out_of_range,
                    std::string(field) + " = " + std::to_string(value) +
                        " outside [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]",
                    field);
    return std::clamp(value, lo, hi);
}

}  // namespace detail

/// Message-parameter extraction: one multimodal request carrying the
/// estimated distance, parsed into RoadParams. The camera position is
/// taken from configuration, never from the model; the distance is the
/// depth estimate passed in.
inline RoadParams generate_message_params(const ImageRef& image,
                                          double distance_m,
                                          ModelProvider& provider,
                                          const std::string& prompt,
                                          const GeoPosition& camera_position,
                                          std::vector<ModelResponse>& trace,
                                          const ExtractOptions& options = {}) {
    ModelRequest request{prompt, &image, Stage::extract};
    return detail::complete_with_repair(
        provider, request, trace, [&](const std::string& text) {
            const nlohmann::json doc = parse_structured_output(
                text, {"number_of_lanes", "driving_lane_status", "cause_code",
                       "sub_cause_code"});
            RoadParams params;
            params.camera_position = camera_position;
            params.distance_to_event_m = distance_m;
            params.number_of_lanes = detail::clamp_or_throw(
                detail::int_field(doc, "number_of_lanes"), limits::lanes_min,
                limits::lanes_max, "number_of_lanes", options.strict_ranges);
            params.cause_code = detail::clamp_or_throw(
                detail::int_field(doc, "cause_code"), 0, limits::cause_code_max,
                "cause_code", options.strict_ranges);
            params.sub_cause_code = detail::clamp_or_throw(
                detail::int_field(doc, "sub_cause_code"), 0,
                limits::cause_code_max, "sub_cause_code", options.strict_ranges);
            if (!doc.at("driving_lane_status").is_string())
                throw Error(Errc::schema_mismatch,
                            "driving_lane_status must be a string",
                            "driving_lane_status");
            params.driving_lane_status =
                doc["driving_lane_status"].get<std::string>();
            try {
                parse_lane_status(params.driving_lane_status);
            } catch (const Error& e) {
                throw Error(Errc::consistency_error,
                            "driving_lane_status: " + e.message(),
                            "driving_lane_status");
            }
            if (static_cast<std::int64_t>(params.driving_lane_status.size()) !=
                params.number_of_lanes)
                throw Error(Errc::consistency_error,
                            "driving_lane_status length " +
                                std::to_string(params.driving_lane_status.size()) +
                                " does not match number_of_lanes " +
                                std::to_string(params.number_of_lanes),
                            "driving_lane_status");
            if (doc.contains("speed_limit_kmh") && !doc["speed_limit_kmh"].is_null())
                params.speed_limit_kmh = detail::clamp_or_throw(
                    detail::int_field(doc, "speed_limit_kmh"), limits::speed_min,
                    limits::speed_max, "speed_limit_kmh", options.strict_ranges);
            if (doc.contains("traffic_flow_rule") &&
                !doc["traffic_flow_rule"].is_null()) {
                const auto& rule = doc["traffic_flow_rule"];
                if (rule.is_string())
                    params.traffic_flow_rule =
                        traffic_flow_rule_from_string(rule.get<std::string>());
                else
                    params.traffic_flow_rule =
                        static_cast<TrafficFlowRule>(detail::clamp_or_throw(
                            detail::int_field(doc, "traffic_flow_rule"), 0, 3,
                            "traffic_flow_rule", options.strict_ranges));
            }
            return params;
        });
}

}  // namespace denmpipe
