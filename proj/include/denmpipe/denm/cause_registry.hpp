#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "denmpipe/denm/types.hpp"
#include "denmpipe/errors.hpp"

namespace denmpipe {

struct CauseEntry {
    std::int64_t code = 0;
    std::string label;
    std::map<std::int64_t, std::string> sub_causes;

    friend bool operator==(const CauseEntry&, const CauseEntry&) = default;
};

namespace detail {

// Event cause classification table transcribed from the ETSI ITS
// CauseCodeType registry. Code 9 is "hazardous location - surface
// condition"; the default registry additionally maps 90 to the same
// label, matching the convention used by the message corpus this
// library reproduces.
inline const char* etsi_cause_table_json() {
    return R"json([
{"code": 0, "label": "reserved", "subCauses": {}},
{"code": 1, "label": "traffic condition", "subCauses": {"0": "unavailable", "1": "increased volume of traffic", "2": "traffic jam slowly increasing", "3": "traffic jam increasing", "4": "traffic jam strongly increasing", "5": "traffic stationary", "6": "traffic jam slightly decreasing", "7": "traffic jam decreasing", "8": "traffic jam strongly decreasing"}},
{"code": 2, "label": "accident", "subCauses": {"0": "unavailable", "1": "multi vehicle accident", "2": "heavy accident", "3": "accident involving lorry", "4": "accident involving bus", "5": "accident involving hazardous materials", "6": "accident on opposite lane", "7": "unsecured accident", "8": "assistance requested"}},
{"code": 3, "label": "roadworks", "subCauses": {"0": "unavailable", "1": "major roadworks", "2": "road marking work", "3": "slow moving road maintenance", "4": "short term stationary roadworks", "5": "street cleaning", "6": "winter service"}},
{"code": 5, "label": "impassability", "subCauses": {"0": "unavailable"}},
{"code": 6, "label": "adverse weather condition - adhesion", "subCauses": {"0": "unavailable", "1": "heavy frost on road", "2": "fuel on road", "3": "mud on road", "4": "snow on road", "5": "ice on road", "6": "black ice on road", "7": "oil on road", "8": "loose chippings", "9": "instant black ice", "10": "roads salted"}},
{"code": 9, "label": "hazardous location - surface condition", "subCauses": {"0": "unavailable", "1": "rockfalls", "2": "earthquake damage", "3": "sewer collapse", "4": "subsidence", "5": "snow drifts", "6": "storm damage", "7": "burst pipe", "8": "volcano eruption", "9": "falling ice"}},
{"code": 10, "label": "hazardous location - obstacle on the road", "subCauses": {"0": "unavailable", "1": "shed load", "2": "parts of vehicles", "3": "parts of tyres", "4": "big objects", "5": "fallen trees", "6": "hub caps", "7": "waiting vehicles"}},
{"code": 11, "label": "hazardous location - animal on the road", "subCauses": {"0": "unavailable", "1": "wild animals", "2": "herd of animals", "3": "small animals", "4": "large animals"}},
{"code": 12, "label": "human presence on the road", "subCauses": {"0": "unavailable", "1": "children on roadway", "2": "cyclist on roadway", "3": "motorcyclist on roadway"}},
{"code": 14, "label": "wrong way driving", "subCauses": {"0": "unavailable", "1": "wrong lane", "2": "wrong direction"}},
{"code": 15, "label": "rescue and recovery work in progress", "subCauses": {"0": "unavailable", "1": "emergency vehicles", "2": "rescue helicopter landing", "3": "police activity ongoing", "4": "medical emergency ongoing", "5": "child abduction in progress"}},
{"code": 17, "label": "adverse weather condition - extreme weather condition", "subCauses": {"0": "unavailable", "1": "strong winds", "2": "damaging hail", "3": "hurricane", "4": "thunderstorm", "5": "tornado", "6": "blizzard"}},
{"code": 18, "label": "adverse weather condition - visibility", "subCauses": {"0": "unavailable", "1": "fog", "2": "smoke", "3": "heavy snowfall", "4": "heavy rain", "5": "heavy hail", "6": "low sun glare", "7": "sandstorms", "8": "swarms of insects"}},
{"code": 19, "label": "adverse weather condition - precipitation", "subCauses": {"0": "unavailable", "1": "heavy rain", "2": "heavy snowfall", "3": "soft hail"}},
{"code": 26, "label": "slow vehicle", "subCauses": {"0": "unavailable", "1": "maintenance vehicle", "2": "vehicles slowing to look at accident", "3": "abnormal load", "4": "abnormal wide load", "5": "convoy", "6": "snowplough", "7": "deicing", "8": "salting vehicles"}},
{"code": 27, "label": "dangerous end of queue", "subCauses": {"0": "unavailable", "1": "sudden end of queue", "2": "queue over hill", "3": "queue around bend", "4": "queue in tunnel"}},
{"code": 91, "label": "vehicle breakdown", "subCauses": {"0": "unavailable", "1": "lack of fuel", "2": "lack of battery power", "3": "engine problem", "4": "transmission problem", "5": "engine cooling problem", "6": "braking system problem", "7": "steering problem", "8": "tyre puncture", "9": "tyre pressure problem"}},
{"code": 92, "label": "post crash", "subCauses": {"0": "unavailable", "1": "accident without ecall triggered", "2": "accident with ecall manually triggered", "3": "accident with ecall automatically triggered", "4": "accident with ecall triggered without access to cellular network"}},
{"code": 93, "label": "human problem", "subCauses": {"0": "unavailable", "1": "glycemia problem", "2": "heart problem"}},
{"code": 94, "label": "stationary vehicle", "subCauses": {"0": "unavailable", "1": "human problem", "2": "vehicle breakdown", "3": "post crash", "4": "public transport stop", "5": "carrying dangerous goods"}},
{"code": 95, "label": "emergency vehicle approaching", "subCauses": {"0": "unavailable", "1": "emergency vehicle approaching", "2": "prioritized vehicle approaching"}},
{"code": 96, "label": "hazardous location - dangerous curve", "subCauses": {"0": "unavailable", "1": "dangerous left turn curve", "2": "dangerous right turn curve", "3": "multiple curves starting with unknown turning direction", "4": "multiple curves starting with left turn", "5": "multiple curves starting with right turn"}},
{"code": 97, "label": "collision risk", "subCauses": {"0": "unavailable", "1": "longitudinal collision risk", "2": "crossing collision risk", "3": "lateral collision risk", "4": "collision risk involving vulnerable road user"}},
{"code": 98, "label": "signal violation", "subCauses": {"0": "unavailable", "1": "stop sign violation", "2": "traffic light violation", "3": "turning regulation violation"}},
{"code": 99, "label": "dangerous situation", "subCauses": {"0": "unavailable", "1": "emergency electronic brake engaged", "2": "pre crash system engaged", "3": "esp engaged", "4": "abs engaged", "5": "aeb engaged", "6": "brake warning engaged", "7": "collision risk warning engaged"}}
])json";
}

}  // namespace detail

/// The cause/sub-cause code registry. Data-driven: defaults are compiled
/// in, and any registry can be loaded from a JSON file of
/// [{code, label, subCauses: {"<sub>": "<label>"}}, ...].
class CauseRegistry {
public:
    static CauseRegistry from_json(const nlohmann::json& doc) {
        if (!doc.is_array())
            throw Error(Errc::bad_format, "cause registry must be a JSON array");
        CauseRegistry reg;
        for (const auto& item : doc) {
            CauseEntry entry;
            entry.code = item.at("code").get<std::int64_t>();
            entry.label = item.at("label").get<std::string>();
            if (item.contains("subCauses")) {
                for (const auto& [k, v] : item.at("subCauses").items())
                    entry.sub_causes[std::stoll(k)] = v.get<std::string>();
            }
            if (entry.code < 0 || entry.code > limits::cause_code_max)
                throw Error(Errc::bad_format,
                            "cause code " + std::to_string(entry.code) +
                                " outside 0..255");
            if (!reg.entries_.emplace(entry.code, std::move(entry)).second)
                throw Error(Errc::bad_format,
                            "duplicate cause code " + std::to_string(entry.code));
        }
        return reg;
    }

    static CauseRegistry from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw Error(Errc::io_error, "cannot open cause registry '" + path + "'");
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::bad_format,
                        "cause registry '" + path + "': " + e.what());
        }
        return from_json(doc);
    }

    /// Strict ETSI mapping (surface condition = 9).
    static const CauseRegistry& builtin_etsi() {
        static const CauseRegistry reg =
            from_json(nlohmann::json::parse(detail::etsi_cause_table_json()));
        return reg;
    }

    /// Default mapping: the ETSI table plus code 90 carrying the
    /// "hazardous location - surface condition" label, as used by the
    /// message corpus this library reproduces.
    static const CauseRegistry& builtin_paper_convention() {
        static const CauseRegistry reg = [] {
            CauseRegistry r = builtin_etsi();
            CauseEntry ninety = *r.lookup(9);
            ninety.code = 90;
            r.entries_.emplace(90, std::move(ninety));
            return r;
        }();
        return reg;
    }

    const CauseEntry* lookup(std::int64_t code) const {
        auto it = entries_.find(code);
        return it == entries_.end() ? nullptr : &it->second;
    }

    bool contains(std::int64_t code) const { return lookup(code) != nullptr; }

    std::size_t size() const { return entries_.size(); }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [code, entry] : entries_) {
            nlohmann::json subs = nlohmann::json::object();
            for (const auto& [sub, label] : entry.sub_causes)
                subs[std::to_string(sub)] = label;
            arr.push_back({{"code", code}, {"label", entry.label}, {"subCauses", subs}});
        }
        return arr;
    }

private:
    std::map<std::int64_t, CauseEntry> entries_;
};

/// Registry lookup as a pure function; absent codes yield nullptr.
inline const CauseEntry* lookup_cause(const CauseRegistry& registry,
                                      std::int64_t code) {
    return registry.lookup(code);
}

inline const CauseEntry* lookup_cause(std::int64_t code) {
    return CauseRegistry::builtin_paper_convention().lookup(code);
}

}  // namespace denmpipe
