#!/usr/bin/env python3
"""Regenerates the golden vector pairs under fixtures/golden/.

Each vector is a message JSON plus the hex payload produced by the
reference encoder in uper_oracle.py. The six messages cover every
optional-field combination: both containers, neither, situation-only,
alacarte-only, and both alacarte optional-subfield patterns.
"""

import json
import os

import uper_oracle

FIXED_CLOCK_ITS_MS = 694310400000  # 2026-01-01T00:00:00Z

GOLDENS = {
    # everything present: the end-to-end pipeline shape
    "golden_denm_1": {
        "management": {
            "action_id": {"originating_station_id": 101, "sequence_number": 7},
            "detection_time_its_ms": FIXED_CLOCK_ITS_MS,
            "reference_time_its_ms": FIXED_CLOCK_ITS_MS,
            "event_position": {"latitude": 482000000, "longitude": 161000000,
                               "altitude_cm": 35000},
            "validity_duration_s": 600,
            "station_type": 15,
        },
        "situation": {"information_quality": 3, "cause_code": 90,
                      "sub_cause_code": 0},
        "alacarte": {"number_of_lanes": 3, "driving_lane_status": "110",
                     "distance_to_event_dm": 842, "speed_limit_kmh": 120,
                     "traffic_flow_rule": "pass_to_left"},
    },
    # bare management, all optionals absent, minimum field values
    "golden_denm_2": {
        "management": {
            "action_id": {"originating_station_id": 0, "sequence_number": 0},
            "detection_time_its_ms": 0,
            "reference_time_its_ms": 0,
            "event_position": {"latitude": -900000000, "longitude": -1800000000,
                               "altitude_cm": -100000},
            "station_type": 0,
        },
    },
    # situation without alacarte
    "golden_denm_3": {
        "management": {
            "action_id": {"originating_station_id": 77, "sequence_number": 3},
            "detection_time_its_ms": 500,
            "reference_time_its_ms": 1500,
            "event_position": {"latitude": 10, "longitude": -10,
                               "altitude_cm": 0},
            "validity_duration_s": 0,
            "station_type": 15,
        },
        "situation": {"information_quality": 0, "cause_code": 2,
                      "sub_cause_code": 7},
    },
    # alacarte without situation, no alacarte optionals
    "golden_denm_4": {
        "management": {
            "action_id": {"originating_station_id": 1, "sequence_number": 65535},
            "detection_time_its_ms": 42,
            "reference_time_its_ms": 42,
            "event_position": {"latitude": 900000001, "longitude": 1800000001,
                               "altitude_cm": 800001},
            "station_type": 15,
        },
        "alacarte": {"number_of_lanes": 1, "driving_lane_status": "1"},
    },
    # distance only among the alacarte optionals, widest lane count
    "golden_denm_5": {
        "management": {
            "action_id": {"originating_station_id": 3000000000,
                          "sequence_number": 12345},
            "detection_time_its_ms": 4398046511103,
            "reference_time_its_ms": 4398046511103,
            "event_position": {"latitude": -271828182, "longitude": 314159265,
                               "altitude_cm": 12345},
            "station_type": 15,
        },
        "situation": {"information_quality": 7, "cause_code": 9,
                      "sub_cause_code": 9},
        "alacarte": {"number_of_lanes": 13,
                     "driving_lane_status": "1010101010101",
                     "distance_to_event_dm": 65535},
    },
    # speed and flow rule without distance
    "golden_denm_6": {
        "management": {
            "action_id": {"originating_station_id": 4294967295,
                          "sequence_number": 1},
            "detection_time_its_ms": 1000,
            "reference_time_its_ms": 2000,
            "event_position": {"latitude": 0, "longitude": 0, "altitude_cm": 0},
            "validity_duration_s": 86400,
            "station_type": 255,
        },
        "situation": {"information_quality": 5, "cause_code": 94,
                      "sub_cause_code": 2},
        "alacarte": {"number_of_lanes": 2, "driving_lane_status": "01",
                     "speed_limit_kmh": 255,
                     "traffic_flow_rule": "pass_to_right"},
    },
}


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "fixtures", "golden")
    os.makedirs(out_dir, exist_ok=True)
    for name, doc in GOLDENS.items():
        with open(os.path.join(out_dir, name + ".json"), "w",
                  encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        with open(os.path.join(out_dir, name + ".uper"), "w",
                  encoding="utf-8") as fh:
            fh.write(uper_oracle.encode(doc) + "\n")
        print(name, uper_oracle.encode(doc))


if __name__ == "__main__":
    main()
