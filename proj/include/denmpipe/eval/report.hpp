#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "denmpipe/eval/metrics.hpp"

namespace denmpipe {

enum class ReportFormat { text, json };

namespace detail {

/// "96.12%" style: two decimals, except integral percentages which drop
/// them ("100%"); undefined ratios render as "n/a".
inline std::string format_percent(const std::optional<double>& ratio) {
    if (!ratio) return "n/a";
    const double pct = *ratio * 100.0;
    char buf[32];
    if (std::fabs(pct - std::round(pct)) < 1e-9)
        std::snprintf(buf, sizeof(buf), "%lld%%",
                      static_cast<long long>(std::llround(pct)));
    else
        std::snprintf(buf, sizeof(buf), "%.2f%%", pct);
    return buf;
}

inline nlohmann::json ratio_or_null(const std::optional<double>& ratio) {
    if (!ratio) return nullptr;
    return *ratio;
}

}  // namespace detail

inline nlohmann::json report_to_json(const DetectionMetrics& det,
                                     const FieldMetrics& fields,
                                     const SchemaMetrics& schema) {
    using detail::ratio_or_null;
    return {
        {"detection",
         {{"tp", det.tp},
          {"fp", det.fp},
          {"tn", det.tn},
          {"fn", det.fn},
          {"accuracy", ratio_or_null(det.accuracy)},
          {"recall", ratio_or_null(det.recall)},
          {"precision", ratio_or_null(det.precision)},
          {"f1", ratio_or_null(det.f1)}}},
        {"fields",
         {{"denominator", fields.denominator},
          {"lanes_hits", fields.lanes_hits},
          {"lane_status_hits", fields.status_hits},
          {"cause_hits", fields.cause_hits},
          {"lanes_accuracy", ratio_or_null(fields.lanes_accuracy)},
          {"lane_status_accuracy", ratio_or_null(fields.lane_status_accuracy)},
          {"cause_accuracy", ratio_or_null(fields.cause_accuracy)}}},
        {"schema",
         {{"valid_count", schema.valid_count},
          {"total_generated", schema.total_generated},
          {"accuracy", ratio_or_null(schema.accuracy)}}},
    };
}

/// Text table mirroring the evaluation column order: the four situation
/// detection metrics, then the three per-field accuracies, then message
/// schema validity.
inline std::string render_report(const DetectionMetrics& det,
                                 const FieldMetrics& fields,
                                 const SchemaMetrics& schema,
                                 ReportFormat format) {
    if (format == ReportFormat::json)
        return report_to_json(det, fields, schema).dump(2) + "\n";

    using detail::format_percent;
    struct Cell {
        const char* task;
        const char* metric;
        std::string value;
    };
    const Cell cells[] = {
        {"Situation Detection", "Accuracy", format_percent(det.accuracy)},
        {"Situation Detection", "Recall", format_percent(det.recall)},
        {"Situation Detection", "Precision", format_percent(det.precision)},
        {"Situation Detection", "F1-Score", format_percent(det.f1)},
        {"Number of Lanes", "Accuracy", format_percent(fields.lanes_accuracy)},
        {"Driving Lane Status", "Accuracy",
         format_percent(fields.lane_status_accuracy)},
        {"Cause Code", "Accuracy", format_percent(fields.cause_accuracy)},
        {"Message Schema", "Accuracy", format_percent(schema.accuracy)},
    };

    std::ostringstream out;
    out << "Task                 Metric     Value\n";
    out << "-------------------  ---------  -------\n";
    for (const Cell& c : cells) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-19s  %-9s  %s\n", c.task, c.metric,
                      c.value.c_str());
        out << line;
    }
    char counts[160];
    std::snprintf(counts, sizeof(counts),
                  "\nConfusion: tp=%lld fp=%lld tn=%lld fn=%lld (N=%lld); "
                  "field denominator=%lld; schema %lld/%lld\n",
                  static_cast<long long>(det.tp), static_cast<long long>(det.fp),
                  static_cast<long long>(det.tn), static_cast<long long>(det.fn),
                  static_cast<long long>(det.tp + det.fp + det.tn + det.fn),
                  static_cast<long long>(fields.denominator),
                  static_cast<long long>(schema.valid_count),
                  static_cast<long long>(schema.total_generated));
    out << counts;
    return out.str();
}

}  // namespace denmpipe
