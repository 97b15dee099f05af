#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "denmpipe/agents/image.hpp"
#include "denmpipe/agents/types.hpp"
#include "denmpipe/providers/model.hpp"
#include "denmpipe/providers/structured.hpp"

namespace denmpipe {

namespace detail {

inline bool is_repairable(Errc c) {
    return c == Errc::no_json_found || c == Errc::missing_keys ||
           c == Errc::schema_mismatch || c == Errc::consistency_error ||
           c == Errc::field_out_of_range || c == Errc::bad_format;
}

inline const char* repair_suffix() {
    return "\n\nYour previous reply could not be parsed. Respond with exactly "
           "one JSON object containing the required keys and nothing else.";
}

/// Issues the request, parses; on a parse-class failure issues one repair
/// re-prompt and parses again. Every actual model exchange is appended to
/// `trace` so callers can account for real request counts.
template <typename ParseFn>
auto complete_with_repair(ModelProvider& provider, const ModelRequest& request,
                          std::vector<ModelResponse>& trace, ParseFn parse) {
    const ModelResponse first = provider.complete(request);
    trace.push_back(first);
    try {
        return parse(first.text);
    } catch (const Error& e) {
        if (!is_repairable(e.code())) throw;
    }
    ModelRequest repair = request;
    repair.prompt += repair_suffix();
    const ModelResponse second = provider.complete(repair);
    trace.push_back(second);
    try {
        return parse(second.text);
    } catch (const Error& e) {
        if (e.code() == Errc::no_json_found || e.code() == Errc::missing_keys)
            throw Error(Errc::unparseable_output,
                        "output unusable after one repair attempt: " + e.message(),
                        e.field(), e.detail());
        throw;
    }
}

inline std::int64_t int_field(const nlohmann::json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == static_cast<std::int64_t>(d)) return static_cast<std::int64_t>(d);
    }
    if (v.is_string()) {
        try {
            std::size_t used = 0;
            const std::int64_t n = std::stoll(v.get<std::string>(), &used);
            if (used == v.get<std::string>().size()) return n;
        } catch (const std::exception&) {
        }
    }
    throw Error(Errc::schema_mismatch,
                std::string("key '") + key + "' is not an integer", key);
}

}  // namespace detail

/// Situation detection: one multimodal request with the detection prompt,
/// structured-output parse into a DetectionResult. A DENM verdict must
/// carry a well-formed 0..1000 bounding box.
inline DetectionResult detect_situation(const ImageRef& image,
                                        ModelProvider& provider,
                                        const std::string& prompt,
                                        std::vector<ModelResponse>& trace) {
    ModelRequest request{prompt, &image, Stage::detect};
    return detail::complete_with_repair(
        provider, request, trace, [](const std::string& text) {
            const nlohmann::json doc = parse_structured_output(
                text, {"situation_type", "description"});
            DetectionResult result;
            const std::string verdict = doc.at("situation_type").is_string()
                                            ? doc["situation_type"].get<std::string>()
                                            : std::string{};
            if (verdict == "DENM")
                result.situation_type = SituationType::DENM;
            else if (verdict == "NONE")
                result.situation_type = SituationType::NONE;
            else
                throw Error(Errc::schema_mismatch,
                            "situation_type must be DENM or NONE, got '" +
                                verdict + "'",
                            "situation_type");
            result.description = doc.at("description").is_string()
                                     ? doc["description"].get<std::string>()
                                     : doc["description"].dump();
            if (doc.contains("confidence_note") &&
                doc["confidence_note"].is_string())
                result.confidence_note = doc["confidence_note"].get<std::string>();

            if (result.situation_type == SituationType::DENM) {
                if (!doc.contains("bbox") || !doc["bbox"].is_array() ||
                    doc["bbox"].size() != 4)
                    throw Error(Errc::schema_mismatch,
                                "DENM verdict requires bbox [ymin,xmin,ymax,xmax]",
                                "bbox");
                BoxNorm box;
                const auto& arr = doc["bbox"];
                box.ymin = arr[0].get<std::int64_t>();
                box.xmin = arr[1].get<std::int64_t>();
                box.ymax = arr[2].get<std::int64_t>();
                box.xmax = arr[3].get<std::int64_t>();
                if (box.ymin < 0 || box.xmin < 0 || box.ymax > 1000 ||
                    box.xmax > 1000 || box.ymin >= box.ymax || box.xmin >= box.xmax)
                    throw Error(Errc::schema_mismatch,
                                "bbox coordinates violate the 0..1000 "
                                "ymin<ymax, xmin<xmax convention",
                                "bbox");
                result.bbox_norm = box;
            }
            return result;
        });
}

}  // namespace denmpipe
