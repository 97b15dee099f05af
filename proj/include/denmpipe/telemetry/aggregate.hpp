#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "denmpipe/telemetry/log.hpp"

namespace denmpipe {

struct AggregateStats {
    std::string model_id;
    std::int64_t request_count = 0;
    std::optional<double> avg_tokens_per_request;  // absent if all unknown
    double avg_latency_s = 0.0;
    std::int64_t unknown_token_count = 0;
};

/// Arithmetic means over all records for one model. Token averages skip
/// unknown counts rather than treating them as zero.
inline AggregateStats aggregate(const std::vector<RequestRecord>& records,
                                const std::string& model_id) {
    AggregateStats stats;
    stats.model_id = model_id;
    std::int64_t token_sum = 0, known = 0, latency_sum = 0;
    for (const RequestRecord& r : records) {
        if (r.model_id != model_id) continue;
        ++stats.request_count;
        latency_sum += r.latency_ms;
        if (r.total_tokens >= 0) {
            token_sum += r.total_tokens;
            ++known;
        } else {
            ++stats.unknown_token_count;
        }
    }
    if (stats.request_count == 0)
        throw Error(Errc::empty_log, "no records for model '" + model_id + "'",
                    model_id);
    if (known > 0)
        stats.avg_tokens_per_request =
            static_cast<double>(token_sum) / static_cast<double>(known);
    stats.avg_latency_s = static_cast<double>(latency_sum) /
                          static_cast<double>(stats.request_count) / 1000.0;
    return stats;
}

inline std::vector<std::string> model_ids_in(
    const std::vector<RequestRecord>& records) {
    std::set<std::string> seen;
    std::vector<std::string> out;
    for (const RequestRecord& r : records)
        if (seen.insert(r.model_id).second) out.push_back(r.model_id);
    return out;
}

namespace detail {

inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

/// Integral values render without decimals ("2386"), fractional ones
/// with two ("2386.50").
inline std::string format_count(double value) {
    if (std::fabs(value - std::round(value)) < 1e-9)
        return std::to_string(static_cast<long long>(std::llround(value)));
    return format_fixed(value, 2);
}

}  // namespace detail

/// Text table shaped like the request-statistics summary: one row per
/// model, latency in seconds to two decimals.
inline std::string render_stats_table(const std::vector<AggregateStats>& rows) {
    std::size_t name_w = std::string("Model").size();
    for (const auto& r : rows) name_w = std::max(name_w, r.model_id.size());

    std::ostringstream out;
    out << std::string(name_w, ' ').replace(0, 5, "Model")
        << "  Requests  Avg. Tokens per Request  Avg. Latency per Request\n";
    for (const auto& r : rows) {
        std::string tokens = r.avg_tokens_per_request
                                 ? detail::format_count(*r.avg_tokens_per_request)
                                 : std::string("unknown");
        if (r.unknown_token_count > 0 && r.avg_tokens_per_request)
            tokens += " (" + std::to_string(r.unknown_token_count) + " unknown)";
        std::string name = r.model_id;
        name.resize(name_w, ' ');
        char line[256];
        std::snprintf(line, sizeof(line), "%s  %8lld  %23s  %23s\n", name.c_str(),
                      static_cast<long long>(r.request_count), tokens.c_str(),
                      (detail::format_fixed(r.avg_latency_s, 2) + "s").c_str());
        out << line;
    }
    return out.str();
}

inline nlohmann::json to_json(const AggregateStats& s) {
    nlohmann::json doc = {{"model_id", s.model_id},
                          {"request_count", s.request_count},
                          {"avg_latency_s",
                           std::round(s.avg_latency_s * 100.0) / 100.0},
                          {"unknown_token_count", s.unknown_token_count}};
    if (s.avg_tokens_per_request)
        doc["avg_tokens_per_request"] = *s.avg_tokens_per_request;
    else
        doc["avg_tokens_per_request"] = nullptr;
    return doc;
}

}  // namespace denmpipe
