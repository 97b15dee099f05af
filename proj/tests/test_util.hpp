#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "denmpipe/denm/types.hpp"

namespace denmpipe::testing {

inline std::string source_dir() { return DENMPIPE_SOURCE_DIR; }

inline std::string fixture_path(const std::string& rel) {
    return source_dir() + "/fixtures/" + rel;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::filesystem::path fresh_temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("denmpipe_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Uniformly random message satisfying non-strict validation; every
/// optional toggled independently.
inline Denm make_random_denm(std::mt19937_64& rng) {
    auto uniform = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    Denm d;
    d.management.action_id.originating_station_id = uniform(0, 4294967295LL);
    d.management.action_id.sequence_number = uniform(0, 65535);
    const std::int64_t t1 = uniform(0, 4398046511103LL);
    const std::int64_t t2 = uniform(0, 4398046511103LL);
    d.management.detection_time_its_ms = std::min(t1, t2);
    d.management.reference_time_its_ms = std::max(t1, t2);
    d.management.event_position.latitude = uniform(-900000000, 900000001);
    d.management.event_position.longitude = uniform(-1800000000, 1800000001);
    d.management.event_position.altitude_cm = uniform(-100000, 800001);
    if (rng() & 1) d.management.validity_duration_s = uniform(0, 86400);
    d.management.station_type = uniform(0, 255);

    if (rng() & 1) {
        SituationContainer s;
        s.information_quality = uniform(0, 7);
        s.cause_code = uniform(0, 255);
        s.sub_cause_code = uniform(0, 255);
        d.situation = s;
    }
    if (rng() & 1) {
        AlacarteContainer a;
        a.number_of_lanes = uniform(1, 13);
        a.driving_lane_status.assign(static_cast<std::size_t>(a.number_of_lanes), '0');
        for (auto& c : a.driving_lane_status)
            if (rng() & 1) c = '1';
        if (rng() & 1) a.distance_to_event_dm = uniform(0, 65535);
        if (rng() & 1) a.speed_limit_kmh = uniform(1, 255);
        if (rng() & 1)
            a.traffic_flow_rule = static_cast<TrafficFlowRule>(uniform(0, 3));
        d.alacarte = a;
    }
    return d;
}

}  // namespace denmpipe::testing
