#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "denmpipe/agents/types.hpp"
#include "denmpipe/denm/json.hpp"
#include "denmpipe/denm/validate.hpp"
#include "denmpipe/errors.hpp"
#include "denmpipe/eval/ground_truth.hpp"
#include "denmpipe/uper/codec.hpp"
#include "denmpipe/uper/hex.hpp"

namespace denmpipe {

struct DetectionMetrics {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

/// Ratio fields stay undefined (not zero) whenever their denominator is
/// zero.
inline DetectionMetrics detection_metrics_from_counts(std::int64_t tp,
                                                      std::int64_t fp,
                                                      std::int64_t tn,
                                                      std::int64_t fn) {
    DetectionMetrics m;
    m.tp = tp;
    m.fp = fp;
    m.tn = tn;
    m.fn = fn;
    const std::int64_t total = tp + fp + tn + fn;
    if (total > 0)
        m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
    if (tp + fp > 0)
        m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0)
        m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
}

/// Frame-level confusion counts of predicted verdicts against ground
/// truth. Every labeled frame must have a prediction.
inline DetectionMetrics score_detection(
    const std::map<std::string, SituationType>& predictions,
    const std::vector<GroundTruthRow>& gt) {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (const GroundTruthRow& row : gt) {
        const auto it = predictions.find(row.image_id);
        if (it == predictions.end())
            throw Error(Errc::missing_prediction,
                        "no prediction for image '" + row.image_id + "'",
                        row.image_id);
        const bool predicted = it->second == SituationType::DENM;
        if (row.situation_present)
            predicted ? ++tp : ++fn;
        else
            predicted ? ++fp : ++tn;
    }
    return detection_metrics_from_counts(tp, fp, tn, fn);
}

/// Field values read back from one generated message (or nothing when
/// the frame was not detected, so no message exists).
struct FieldPrediction {
    std::optional<std::int64_t> number_of_lanes;
    std::optional<std::string> driving_lane_status;
    std::optional<std::int64_t> cause_code;
};

struct FieldMetrics {
    std::int64_t lanes_hits = 0;
    std::int64_t status_hits = 0;
    std::int64_t cause_hits = 0;
    std::int64_t denominator = 0;  // count of GT-positive frames
    std::optional<double> lanes_accuracy;
    std::optional<double> lane_status_accuracy;
    std::optional<double> cause_accuracy;
};

/// Per-field exact-match accuracy over the GT-positive frames. A hit
/// requires the frame to have been detected (an output exists) and the
/// predicted value to equal ground truth exactly; undetected positives
/// miss every field. Detected negatives (false positives) do not enter
/// the denominator.
inline FieldMetrics score_fields(
    const std::map<std::string, FieldPrediction>& outputs,
    const std::vector<GroundTruthRow>& gt) {
    FieldMetrics m;
    for (const GroundTruthRow& row : gt) {
        if (!row.situation_present) continue;
        ++m.denominator;
        const auto it = outputs.find(row.image_id);
        if (it == outputs.end()) continue;
        const FieldPrediction& p = it->second;
        if (p.number_of_lanes && *p.number_of_lanes == *row.number_of_lanes)
            ++m.lanes_hits;
        if (p.driving_lane_status &&
            *p.driving_lane_status == *row.driving_lane_status)
            ++m.status_hits;
        if (p.cause_code && *p.cause_code == *row.cause_code) ++m.cause_hits;
    }
    if (m.denominator > 0) {
        const double d = static_cast<double>(m.denominator);
        m.lanes_accuracy = static_cast<double>(m.lanes_hits) / d;
        m.lane_status_accuracy = static_cast<double>(m.status_hits) / d;
        m.cause_accuracy = static_cast<double>(m.cause_hits) / d;
    }
    return m;
}

struct SchemaMetrics {
    std::int64_t valid_count = 0;
    std::int64_t total_generated = 0;
    std::optional<double> accuracy;
    std::vector<std::string> failures;  // "<file>: <reason>" per invalid message
};

/// A generated message counts valid iff its JSON form passes strict
/// validation and its hex payload decodes back to exactly that JSON
/// content. Unreadable or unpaired files count invalid with a recorded
/// reason.
inline SchemaMetrics score_schema(const std::string& payload_dir,
                                  const CauseRegistry* registry = nullptr) {
    namespace fs = std::filesystem;
    SchemaMetrics m;
    if (!fs::is_directory(payload_dir)) {
        return m;  // nothing generated
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(payload_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 10 && name.substr(name.size() - 10) == ".denm.json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& json_path : files) {
        ++m.total_generated;
        const std::string stem =
            json_path.filename().string().substr(
                0, json_path.filename().string().size() - 10);
        const fs::path uper_path = json_path.parent_path() / (stem + ".uper");
        try {
            const Denm denm = read_denm_json_file(json_path.string());
            const ValidationReport report = validate_denm(denm, true, registry);
            if (!report.valid) throw InvalidMessageError(report);
            const UperPayload payload = read_uper_file(uper_path.string());
            if (decode_denm(payload) != denm)
                throw Error(Errc::consistency_error,
                            "payload does not decode to the stored JSON");
            ++m.valid_count;
        } catch (const std::exception& e) {
            m.failures.push_back(json_path.filename().string() + ": " + e.what());
        }
    }
    if (m.total_generated > 0)
        m.accuracy = static_cast<double>(m.valid_count) /
                     static_cast<double>(m.total_generated);
    return m;
}

}  // namespace denmpipe
