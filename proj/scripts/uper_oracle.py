#!/usr/bin/env python3
"""Independent reference encoder for the DENM wire format.

Implements the field/width table from docs/wire-format.md directly, with
no code shared with the C++ encoder. Used to produce (and re-check) the
golden vectors under fixtures/golden/.

Usage: uper_oracle.py <message.json>   # prints uppercase hex
"""

import json
import sys

ITS_TIME_MAX = 2**42 - 1

FLOW_RULES = {"no_passing": 0, "no_passing_for_trucks": 1,
              "pass_to_left": 2, "pass_to_right": 3}


class BitWriter:
    def __init__(self):
        self.bits = []

    def flag(self, value):
        self.bits.append(1 if value else 0)

    def uint(self, value, lo, hi):
        if not (lo <= value <= hi):
            raise ValueError(f"{value} outside [{lo}, {hi}]")
        width = 0 if hi == lo else (hi - lo).bit_length()
        offset = value - lo
        for i in reversed(range(width)):
            self.bits.append((offset >> i) & 1)

    def hex(self):
        padded = self.bits + [0] * (-len(self.bits) % 8)
        out = bytearray()
        for i in range(0, len(padded), 8):
            byte = 0
            for b in padded[i:i + 8]:
                byte = (byte << 1) | b
            out.append(byte)
        return out.hex().upper()


def encode(doc):
    w = BitWriter()
    sit = doc.get("situation")
    ala = doc.get("alacarte")
    w.flag(sit is not None)
    w.flag(ala is not None)

    m = doc["management"]
    validity = m.get("validity_duration_s")
    w.flag(validity is not None)
    w.uint(m["action_id"]["originating_station_id"], 0, 4294967295)
    w.uint(m["action_id"]["sequence_number"], 0, 65535)
    w.uint(m["detection_time_its_ms"], 0, ITS_TIME_MAX)
    w.uint(m["reference_time_its_ms"], 0, ITS_TIME_MAX)
    w.uint(m["event_position"]["latitude"], -900000000, 900000001)
    w.uint(m["event_position"]["longitude"], -1800000000, 1800000001)
    w.uint(m["event_position"]["altitude_cm"], -100000, 800001)
    if validity is not None:
        w.uint(validity, 0, 86400)
    w.uint(m["station_type"], 0, 255)

    if sit is not None:
        w.uint(sit["information_quality"], 0, 7)
        w.uint(sit["cause_code"], 0, 255)
        w.uint(sit["sub_cause_code"], 0, 255)

    if ala is not None:
        distance = ala.get("distance_to_event_dm")
        speed = ala.get("speed_limit_kmh")
        flow = ala.get("traffic_flow_rule")
        w.flag(distance is not None)
        w.flag(speed is not None)
        w.flag(flow is not None)
        w.uint(ala["number_of_lanes"], 1, 13)
        status = ala["driving_lane_status"]
        w.uint(len(status), 1, 13)
        for ch in status:
            w.flag(ch == "1")
        if distance is not None:
            w.uint(distance, 0, 65535)
        if speed is not None:
            w.uint(speed, 1, 255)
        if flow is not None:
            w.uint(FLOW_RULES[flow] if isinstance(flow, str) else flow, 0, 3)

    return w.hex()


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__.strip())
    with open(sys.argv[1], encoding="utf-8") as fh:
        print(encode(json.load(fh)))


if __name__ == "__main__":
    main()
