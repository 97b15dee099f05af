#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "denmpipe/denm/cause_registry.hpp"
#include "denmpipe/denm/types.hpp"

namespace denmpipe {

struct Violation {
    std::string path;     // e.g. "alacarte.driving_lane_status"
    std::string rule;     // short rule id, e.g. "range", "length_mismatch"
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;

    void add(std::string path, std::string rule, std::string message) {
        valid = false;
        violations.push_back({std::move(path), std::move(rule), std::move(message)});
    }
};

namespace detail {

inline void check_range(ValidationReport& r, const std::string& path,
                        std::int64_t value, std::int64_t lo, std::int64_t hi) {
    if (value < lo || value > hi)
        r.add(path, "range",
              std::to_string(value) + " outside [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
}

}  // namespace detail

/// Checks every structural invariant of the DENM subset and reports all
/// violations, not just the first. Accepts arbitrary candidate values,
/// including range-violating ones deserialized from hostile input; a
/// malformed message yields valid=false, never a throw.
///
/// strict additionally requires the cause code to be registered and the
/// alacarte container to accompany the situation container. The registry
/// defaults to the built-in table.
inline ValidationReport validate_denm(const Denm& denm, bool strict,
                                      const CauseRegistry* registry = nullptr) {
    using namespace limits;
    ValidationReport report;

    const ManagementContainer& m = denm.management;
    detail::check_range(report, "management.action_id.originating_station_id",
                        m.action_id.originating_station_id, 0, station_id_max);
    detail::check_range(report, "management.action_id.sequence_number",
                        m.action_id.sequence_number, 0, sequence_number_max);
    detail::check_range(report, "management.detection_time_its_ms",
                        m.detection_time_its_ms, 0, its_time_max);
    detail::check_range(report, "management.reference_time_its_ms",
                        m.reference_time_its_ms, 0, its_time_max);
    if (m.reference_time_its_ms < m.detection_time_its_ms)
        report.add("management.reference_time_its_ms", "time_order",
                   "reference time precedes detection time");
    detail::check_range(report, "management.event_position.latitude",
                        m.event_position.latitude, latitude_min, latitude_max);
    detail::check_range(report, "management.event_position.longitude",
                        m.event_position.longitude, longitude_min, longitude_max);
    detail::check_range(report, "management.event_position.altitude_cm",
                        m.event_position.altitude_cm, altitude_cm_min,
                        altitude_cm_max);
    if (m.validity_duration_s)
        detail::check_range(report, "management.validity_duration_s",
                            *m.validity_duration_s, 0, validity_duration_max);
    detail::check_range(report, "management.station_type", m.station_type, 0,
                        station_type_max);

    if (denm.situation) {
        const SituationContainer& s = *denm.situation;
        detail::check_range(report, "situation.information_quality",
                            s.information_quality, 0, information_quality_max);
        detail::check_range(report, "situation.cause_code", s.cause_code, 0,
                            cause_code_max);
        detail::check_range(report, "situation.sub_cause_code", s.sub_cause_code,
                            0, cause_code_max);
        if (strict) {
            const CauseRegistry& reg =
                registry ? *registry : CauseRegistry::builtin_paper_convention();
            if (s.cause_code >= 0 && s.cause_code <= cause_code_max &&
                !reg.contains(s.cause_code))
                report.add("situation.cause_code", "registry",
                           "cause code " + std::to_string(s.cause_code) +
                               " not present in registry");
        }
        if (strict && !denm.alacarte)
            report.add("alacarte", "container_dependency",
                       "alacarte container must accompany the situation container");
    }

    if (denm.alacarte) {
        const AlacarteContainer& a = *denm.alacarte;
        detail::check_range(report, "alacarte.number_of_lanes", a.number_of_lanes,
                            lanes_min, lanes_max);
        const std::string& status = a.driving_lane_status;
        if (status.empty() || status.size() > 13)
            report.add("alacarte.driving_lane_status", "length",
                       "lane status length " + std::to_string(status.size()) +
                           " outside 1..13");
        for (std::size_t i = 0; i < status.size(); ++i) {
            if (status[i] != '0' && status[i] != '1') {
                report.add("alacarte.driving_lane_status", "binary_chars",
                           std::string("character '") + status[i] + "' at index " +
                               std::to_string(i) + " is not '0' or '1'");
                break;
            }
        }
        if (static_cast<std::int64_t>(status.size()) != a.number_of_lanes)
            report.add("alacarte.driving_lane_status", "length_mismatch",
                       "length must equal number_of_lanes (" +
                           std::to_string(status.size()) + " != " +
                           std::to_string(a.number_of_lanes) + ")");
        if (a.distance_to_event_dm)
            detail::check_range(report, "alacarte.distance_to_event_dm",
                                *a.distance_to_event_dm, 0, distance_dm_max);
        if (a.speed_limit_kmh)
            detail::check_range(report, "alacarte.speed_limit_kmh",
                                *a.speed_limit_kmh, speed_min, speed_max);
    }

    return report;
}

}  // namespace denmpipe
