#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "denmpipe/denm/types.hpp"
#include "denmpipe/errors.hpp"

namespace denmpipe {

// JSON form of the message: snake_case field names matching the domain
// types, optional fields omitted entirely when absent. Parsing is strict
// on structure but deliberately lenient on ranges, so hostile values
// survive into validate_denm instead of failing here.

inline nlohmann::json to_json(const GeoPosition& p) {
    return {{"latitude", p.latitude},
            {"longitude", p.longitude},
            {"altitude_cm", p.altitude_cm}};
}

inline nlohmann::json to_json(const Denm& denm) {
    const ManagementContainer& m = denm.management;
    nlohmann::json mgmt = {
        {"action_id",
         {{"originating_station_id", m.action_id.originating_station_id},
          {"sequence_number", m.action_id.sequence_number}}},
        {"detection_time_its_ms", m.detection_time_its_ms},
        {"reference_time_its_ms", m.reference_time_its_ms},
        {"event_position", to_json(m.event_position)},
        {"station_type", m.station_type},
    };
    if (m.validity_duration_s) mgmt["validity_duration_s"] = *m.validity_duration_s;

    nlohmann::json doc = {{"management", std::move(mgmt)}};
    if (denm.situation) {
        doc["situation"] = {
            {"information_quality", denm.situation->information_quality},
            {"cause_code", denm.situation->cause_code},
            {"sub_cause_code", denm.situation->sub_cause_code},
        };
    }
    if (denm.alacarte) {
        const AlacarteContainer& a = *denm.alacarte;
        nlohmann::json ala = {
            {"number_of_lanes", a.number_of_lanes},
            {"driving_lane_status", a.driving_lane_status},
        };
        if (a.distance_to_event_dm) ala["distance_to_event_dm"] = *a.distance_to_event_dm;
        if (a.speed_limit_kmh) ala["speed_limit_kmh"] = *a.speed_limit_kmh;
        if (a.traffic_flow_rule) ala["traffic_flow_rule"] = to_string(*a.traffic_flow_rule);
        doc["alacarte"] = std::move(ala);
    }
    return doc;
}

namespace detail {

inline std::int64_t require_int(const nlohmann::json& obj, const char* key,
                                const std::string& path) {
    if (!obj.contains(key))
        throw Error(Errc::bad_format, "missing field " + path + "." + key,
                    path + "." + key);
    if (!obj.at(key).is_number_integer())
        throw Error(Errc::bad_format, path + "." + key + " must be an integer",
                    path + "." + key);
    return obj.at(key).get<std::int64_t>();
}

}  // namespace detail

inline Denm denm_from_json(const nlohmann::json& doc) {
    using detail::require_int;
    if (!doc.is_object())
        throw Error(Errc::bad_format, "message must be a JSON object");
    if (!doc.contains("management"))
        throw Error(Errc::bad_format, "missing field management", "management");

    Denm denm;
    const nlohmann::json& mgmt = doc.at("management");
    if (!mgmt.is_object())
        throw Error(Errc::bad_format, "management must be an object", "management");
    if (!mgmt.contains("action_id") || !mgmt.at("action_id").is_object())
        throw Error(Errc::bad_format, "management.action_id must be an object",
                    "management.action_id");
    denm.management.action_id.originating_station_id = require_int(
        mgmt.at("action_id"), "originating_station_id", "management.action_id");
    denm.management.action_id.sequence_number =
        require_int(mgmt.at("action_id"), "sequence_number", "management.action_id");
    denm.management.detection_time_its_ms =
        require_int(mgmt, "detection_time_its_ms", "management");
    denm.management.reference_time_its_ms =
        require_int(mgmt, "reference_time_its_ms", "management");
    if (!mgmt.contains("event_position") || !mgmt.at("event_position").is_object())
        throw Error(Errc::bad_format, "management.event_position must be an object",
                    "management.event_position");
    const nlohmann::json& pos = mgmt.at("event_position");
    denm.management.event_position.latitude =
        require_int(pos, "latitude", "management.event_position");
    denm.management.event_position.longitude =
        require_int(pos, "longitude", "management.event_position");
    denm.management.event_position.altitude_cm =
        require_int(pos, "altitude_cm", "management.event_position");
    if (mgmt.contains("validity_duration_s"))
        denm.management.validity_duration_s =
            require_int(mgmt, "validity_duration_s", "management");
    denm.management.station_type = require_int(mgmt, "station_type", "management");

    if (doc.contains("situation")) {
        const nlohmann::json& sit = doc.at("situation");
        if (!sit.is_object())
            throw Error(Errc::bad_format, "situation must be an object", "situation");
        SituationContainer s;
        s.information_quality = require_int(sit, "information_quality", "situation");
        s.cause_code = require_int(sit, "cause_code", "situation");
        s.sub_cause_code = require_int(sit, "sub_cause_code", "situation");
        denm.situation = s;
    }

    if (doc.contains("alacarte")) {
        const nlohmann::json& ala = doc.at("alacarte");
        if (!ala.is_object())
            throw Error(Errc::bad_format, "alacarte must be an object", "alacarte");
        AlacarteContainer a;
        a.number_of_lanes = require_int(ala, "number_of_lanes", "alacarte");
        if (!ala.contains("driving_lane_status") ||
            !ala.at("driving_lane_status").is_string())
            throw Error(Errc::bad_format,
                        "alacarte.driving_lane_status must be a string",
                        "alacarte.driving_lane_status");
        a.driving_lane_status = ala.at("driving_lane_status").get<std::string>();
        if (ala.contains("distance_to_event_dm"))
            a.distance_to_event_dm =
                require_int(ala, "distance_to_event_dm", "alacarte");
        if (ala.contains("speed_limit_kmh"))
            a.speed_limit_kmh = require_int(ala, "speed_limit_kmh", "alacarte");
        if (ala.contains("traffic_flow_rule")) {
            const nlohmann::json& rule = ala.at("traffic_flow_rule");
            if (rule.is_string())
                a.traffic_flow_rule =
                    traffic_flow_rule_from_string(rule.get<std::string>());
            else if (rule.is_number_integer() && rule.get<std::int64_t>() >= 0 &&
                     rule.get<std::int64_t>() <= 3)
                a.traffic_flow_rule =
                    static_cast<TrafficFlowRule>(rule.get<std::int64_t>());
            else
                throw Error(Errc::bad_format,
                            "alacarte.traffic_flow_rule must be one of the four "
                            "rule names or 0..3",
                            "alacarte.traffic_flow_rule");
        }
        denm.alacarte = a;
    }
    return denm;
}

inline Denm denm_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::bad_format, std::string("not valid JSON: ") + e.what());
    }
    return denm_from_json(doc);
}

inline Denm read_denm_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return denm_from_json_text(text);
}

inline void write_denm_json_file(const std::string& path, const Denm& denm) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
    out << to_json(denm).dump(2) << '\n';
}

}  // namespace denmpipe
