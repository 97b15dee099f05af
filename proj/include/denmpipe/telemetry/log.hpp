#pragma once

#include <cstdint>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "denmpipe/errors.hpp"
#include "denmpipe/providers/model.hpp"

namespace denmpipe {

/// One model request as the log sees it. total_tokens is -1 when the
/// endpoint reported no usage metadata; such records are excluded from
/// token averages but still count for latency.
struct RequestRecord {
    std::string image_id;
    Stage stage = Stage::detect;
    std::string model_id;
    std::int64_t total_tokens = -1;
    std::int64_t latency_ms = 0;
    std::int64_t timestamp = 0;

    friend bool operator==(const RequestRecord&, const RequestRecord&) = default;
};

inline void check_record(const RequestRecord& r) {
    if (r.latency_ms < 0)
        throw Error(Errc::invariant, "latency_ms must be nonnegative, got " +
                                         std::to_string(r.latency_ms));
    if (r.total_tokens < -1)
        throw Error(Errc::invariant, "total_tokens must be nonnegative or -1");
    if (r.image_id.empty())
        throw Error(Errc::invariant, "image_id must not be empty");
}

inline nlohmann::json to_json(const RequestRecord& r) {
    nlohmann::json doc = {{"image_id", r.image_id},
                          {"stage", to_string(r.stage)},
                          {"model_id", r.model_id},
                          {"latency_ms", r.latency_ms},
                          {"timestamp", r.timestamp}};
    if (r.total_tokens >= 0)
        doc["total_tokens"] = r.total_tokens;
    else
        doc["total_tokens"] = nullptr;
    return doc;
}

inline RequestRecord record_from_json(const nlohmann::json& doc) {
    RequestRecord r;
    r.image_id = doc.at("image_id").get<std::string>();
    r.stage = stage_from_string(doc.at("stage").get<std::string>());
    r.model_id = doc.value("model_id", std::string{});
    if (doc.contains("total_tokens") && !doc["total_tokens"].is_null())
        r.total_tokens = doc["total_tokens"].get<std::int64_t>();
    r.latency_ms = doc.value("latency_ms", std::int64_t{0});
    r.timestamp = doc.value("timestamp", std::int64_t{0});
    check_record(r);
    return r;
}

/// Append-only JSON-lines log with a single serialized writer; lines are
/// flushed per record so concurrent appends land intact and in call
/// order.
class TelemetryLog {
public:
    explicit TelemetryLog(const std::string& path)
        : out_(path, std::ios::app | std::ios::binary) {
        if (!out_)
            throw Error(Errc::io_error, "cannot open telemetry log '" + path + "'");
    }

    void record_request(const RequestRecord& record) {
        check_record(record);
        const std::string line = to_json(record).dump();
        std::lock_guard<std::mutex> lock(mutex_);
        out_ << line << '\n';
        out_.flush();
        if (!out_)
            throw Error(Errc::io_error, "telemetry append failed");
    }

private:
    std::ofstream out_;
    std::mutex mutex_;
};

inline std::vector<RequestRecord> read_telemetry_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read telemetry log '" + path + "'");
    std::vector<RequestRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json doc = nlohmann::json::parse(line, nullptr,
                                                   /*allow_exceptions=*/false);
        if (doc.is_discarded())
            throw Error(Errc::bad_format,
                        "telemetry line " + std::to_string(lineno) +
                            " is not valid JSON",
                        {}, static_cast<std::int64_t>(lineno));
        records.push_back(record_from_json(doc));
    }
    return records;
}

inline RequestRecord make_record(const std::string& image_id, Stage stage,
                                 const ModelResponse& response,
                                 std::int64_t timestamp) {
    RequestRecord r;
    r.image_id = image_id;
    r.stage = stage;
    r.model_id = response.model_id;
    r.total_tokens = response.total_tokens();
    r.latency_ms = response.latency_ms;
    r.timestamp = timestamp;
    return r;
}

}  // namespace denmpipe
