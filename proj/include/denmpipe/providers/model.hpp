#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "denmpipe/agents/image.hpp"
#include "denmpipe/errors.hpp"

namespace denmpipe {

/// Token counts use -1 for "unknown" (endpoint reported no usage
/// metadata); unknown counts are excluded from averages downstream.
struct ModelResponse {
    std::string text;
    std::int64_t prompt_tokens = -1;
    std::int64_t completion_tokens = -1;
    std::int64_t latency_ms = 0;
    std::string model_id;

    std::int64_t total_tokens() const {
        if (prompt_tokens < 0 || completion_tokens < 0) return -1;
        return prompt_tokens + completion_tokens;
    }

    friend bool operator==(const ModelResponse&, const ModelResponse&) = default;
};

inline void check_model_response(const ModelResponse& r) {
    if (r.latency_ms < 0)
        throw Error(Errc::invariant, "latency_ms must be nonnegative");
    if (r.prompt_tokens < -1 || r.completion_tokens < -1)
        throw Error(Errc::invariant, "token counts must be nonnegative or -1");
}

inline nlohmann::json to_json(const ModelResponse& r) {
    return {{"text", r.text},
            {"prompt_tokens", r.prompt_tokens},
            {"completion_tokens", r.completion_tokens},
            {"latency_ms", r.latency_ms},
            {"model_id", r.model_id}};
}

inline ModelResponse model_response_from_json(const nlohmann::json& doc) {
    ModelResponse r;
    r.text = doc.at("text").get<std::string>();
    r.prompt_tokens = doc.value("prompt_tokens", std::int64_t{-1});
    r.completion_tokens = doc.value("completion_tokens", std::int64_t{-1});
    r.latency_ms = doc.value("latency_ms", std::int64_t{0});
    r.model_id = doc.value("model_id", std::string{});
    check_model_response(r);
    return r;
}

/// The two pipeline stages that issue model requests.
enum class Stage { detect, extract };

inline const char* to_string(Stage s) {
    return s == Stage::detect ? "detect" : "extract";
}

inline Stage stage_from_string(const std::string& s) {
    if (s == "detect") return Stage::detect;
    if (s == "extract") return Stage::extract;
    throw Error(Errc::bad_format, "unknown stage '" + s + "'");
}

struct ModelRequest {
    std::string prompt;
    const ImageRef* image = nullptr;
    Stage stage = Stage::detect;
};

/// Multimodal completion contract. Implementations must tolerate
/// concurrent calls.
class ModelProvider {
public:
    virtual ~ModelProvider() = default;
    virtual ModelResponse complete(const ModelRequest& request) = 0;
};

}  // namespace denmpipe
