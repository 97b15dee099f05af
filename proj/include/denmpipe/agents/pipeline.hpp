#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "denmpipe/agents/bbox.hpp"
#include "denmpipe/agents/detect.hpp"
#include "denmpipe/agents/distance.hpp"
#include "denmpipe/agents/extract.hpp"
#include "denmpipe/agents/image.hpp"
#include "denmpipe/agents/types.hpp"
#include "denmpipe/denm/build.hpp"
#include "denmpipe/denm/json.hpp"
#include "denmpipe/denm/validate.hpp"
#include "denmpipe/providers/depth.hpp"
#include "denmpipe/providers/model.hpp"
#include "denmpipe/telemetry/log.hpp"
#include "denmpipe/uper/codec.hpp"
#include "denmpipe/uper/hex.hpp"

namespace denmpipe {

/// Milliseconds since the ITS epoch, 2004-01-01T00:00:00Z.
inline std::int64_t its_now_ms() {
    using namespace std::chrono;
    constexpr auto its_epoch = sys_days{year{2004} / 1 / 1};
    return duration_cast<milliseconds>(system_clock::now() -
                                       time_point<system_clock>(
                                           its_epoch.time_since_epoch()))
        .count();
}

struct ManifestEntry {
    std::string image_id;
    std::string path;  // resolved against the manifest's directory
    std::string camera_id;
};

inline std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read manifest '" + path + "'");
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json doc =
            nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (doc.is_discarded() || !doc.is_object())
            throw Error(Errc::bad_format,
                        "manifest line " + std::to_string(lineno) +
                            " is not a JSON object");
        ManifestEntry e;
        e.image_id = doc.at("image_id").get<std::string>();
        e.path = (base / doc.at("path").get<std::string>()).string();
        e.camera_id = doc.at("camera_id").get<std::string>();
        entries.push_back(std::move(e));
    }
    return entries;
}

struct CameraInfo {
    GeoPosition position;
    std::int64_t station_id = 0;
};

using CameraConfig = std::map<std::string, CameraInfo>;

inline CameraConfig load_camera_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read camera config '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::bad_format,
                    "camera config '" + path + "': " + e.what());
    }
    CameraConfig config;
    for (const auto& [camera_id, v] : doc.items()) {
        CameraInfo info;
        info.position.latitude = v.at("latitude").get<std::int64_t>();
        info.position.longitude = v.at("longitude").get<std::int64_t>();
        info.position.altitude_cm = v.at("altitude_cm").get<std::int64_t>();
        info.station_id = v.at("station_id").get<std::int64_t>();
        config[camera_id] = info;
    }
    return config;
}

/// Prompt templates live in external text files so they can be swapped
/// without a rebuild; the extract template carries a {distance_m}
/// placeholder.
struct PromptSet {
    std::string detect_template;
    std::string extract_template;

    static PromptSet load(const std::string& dir) {
        auto slurp = [](const std::string& p) {
            std::ifstream in(p, std::ios::binary);
            if (!in) throw Error(Errc::io_error, "cannot read prompt '" + p + "'");
            return std::string(std::istreambuf_iterator<char>(in),
                               std::istreambuf_iterator<char>());
        };
        return {slurp(dir + "/detect.txt"), slurp(dir + "/extract.txt")};
    }

    std::string render_extract(double distance_m) const {
        char value[32];
        std::snprintf(value, sizeof(value), "%.1f", distance_m);
        std::string prompt = extract_template;
        const std::string placeholder = "{distance_m}";
        for (std::size_t pos = prompt.find(placeholder); pos != std::string::npos;
             pos = prompt.find(placeholder, pos))
            prompt.replace(pos, placeholder.size(), value);
        return prompt;
    }
};

struct PipelineOutput {
    std::string image_id;
    DetectionResult detection;
    std::optional<PixelBox> pixel_box;
    std::optional<double> distance_m;
    std::optional<Denm> denm;             // present iff detection is DENM
    std::optional<std::string> payload_hex;  // present iff denm present
    std::vector<RequestRecord> request_records;
};

class PipelineStageError : public Error {
public:
    PipelineStageError(std::string stage, const Error& cause)
        : Error(cause.code(), stage + ": " + cause.message(), cause.field(),
                cause.detail()),
          stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct PipelineContext {
    ModelProvider* model = nullptr;
    DepthProvider* depth = nullptr;
    PromptSet prompts;
    CameraConfig cameras;
    BuildOptions build_options;
    ExtractOptions extract_options;
    const CauseRegistry* registry = nullptr;  // null = built-in default
    std::function<std::int64_t()> clock;      // ITS milliseconds
    std::string output_dir;                   // empty = no files persisted
};

namespace detail {

inline nlohmann::json detection_sidecar(const PipelineOutput& out) {
    nlohmann::json doc = {
        {"image_id", out.image_id},
        {"situation_type", to_string(out.detection.situation_type)},
        {"description", out.detection.description},
    };
    if (out.detection.confidence_note)
        doc["confidence_note"] = *out.detection.confidence_note;
    if (out.detection.bbox_norm) {
        const BoxNorm& b = *out.detection.bbox_norm;
        doc["bbox_norm"] = {b.ymin, b.xmin, b.ymax, b.xmax};
    }
    if (out.pixel_box) {
        const PixelBox& p = *out.pixel_box;
        doc["pixel_box"] = {{"x0", p.x0}, {"y0", p.y0}, {"x1", p.x1}, {"y1", p.y1}};
    }
    if (out.distance_m) doc["distance_m"] = *out.distance_m;
    return doc;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
    out << text;
}

}  // namespace detail

/// End-to-end chain for one frame: detect, and on a DENM verdict
/// transform the box, estimate distance, extract parameters, compose,
/// strictly validate, encode and persist. Model exchanges are recorded
/// into the output (and the telemetry log when one is given); errors
/// carry the stage that raised them.
inline PipelineOutput run_pipeline(const ManifestEntry& entry,
                                   const PipelineContext& ctx, std::int64_t seq,
                                   TelemetryLog* log = nullptr) {
    auto staged = [](const char* stage, auto&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            throw PipelineStageError(stage, e);
        }
    };

    PipelineOutput out;
    out.image_id = entry.image_id;

    const auto camera_it = ctx.cameras.find(entry.camera_id);
    if (camera_it == ctx.cameras.end())
        throw PipelineStageError(
            "setup", Error(Errc::bad_config,
                           "camera '" + entry.camera_id + "' not configured"));
    const CameraInfo& camera = camera_it->second;

    const ImageRef image = staged(
        "load_image", [&] { return load_image(entry.path, entry.image_id); });

    std::vector<ModelResponse> detect_trace;
    std::vector<ModelResponse> extract_trace;
    out.detection = staged("detect", [&] {
        return detect_situation(image, *ctx.model, ctx.prompts.detect_template,
                                detect_trace);
    });

    if (out.detection.situation_type == SituationType::DENM) {
        out.pixel_box = staged("transform_bbox", [&] {
            return transform_bbox(*out.detection.bbox_norm, image.width,
                                  image.height);
        });
        out.distance_m = staged("estimate_distance", [&] {
            return estimate_distance(image, *out.pixel_box, *ctx.depth);
        });
        const RoadParams params = staged("generate_message_params", [&] {
            return generate_message_params(
                image, *out.distance_m, *ctx.model,
                ctx.prompts.render_extract(*out.distance_m), camera.position,
                extract_trace, ctx.extract_options);
        });
        const std::int64_t now = ctx.clock();
        out.denm = staged("build_denm", [&] {
            return build_denm(out.detection, params, camera.position,
                              camera.station_id, seq, now, ctx.build_options);
        });
        staged("validate", [&] {
            const ValidationReport report =
                validate_denm(*out.denm, /*strict=*/true, ctx.registry);
            if (!report.valid) throw InvalidMessageError(report);
            return 0;
        });
        out.payload_hex = staged("encode", [&] {
            return payload_to_hex(encode_denm(*out.denm));
        });
    }

    for (const ModelResponse& r : detect_trace)
        out.request_records.push_back(
            make_record(entry.image_id, Stage::detect, r, ctx.clock()));
    for (const ModelResponse& r : extract_trace)
        out.request_records.push_back(
            make_record(entry.image_id, Stage::extract, r, ctx.clock()));

    if (!ctx.output_dir.empty()) {
        staged("persist", [&] {
            const std::string base = ctx.output_dir + "/" + entry.image_id;
            detail::write_text_file(base + ".detect.json",
                                    detail::detection_sidecar(out).dump(2) + "\n");
            if (out.denm) {
                write_denm_json_file(base + ".denm.json", *out.denm);
                detail::write_text_file(base + ".uper", *out.payload_hex + "\n");
            }
            return 0;
        });
    }

    if (log != nullptr)
        for (const RequestRecord& r : out.request_records) log->record_request(r);

    return out;
}

struct BatchItem {
    ManifestEntry entry;
    std::optional<PipelineOutput> output;
    std::string failed_stage;
    std::string error_name;
    std::string error_message;
};

struct BatchResult {
    std::vector<BatchItem> items;
    std::size_t succeeded = 0;
    std::size_t failed = 0;
};

/// Runs a manifest with up to max_in_flight images processed
/// concurrently. Each image's stage chain stays sequential; telemetry
/// records and error lines are flushed in manifest order, so two runs
/// over the same inputs produce identical files. A failed image is
/// logged to errors.jsonl and never aborts the batch.
inline BatchResult run_batch(const std::vector<ManifestEntry>& manifest,
                             const PipelineContext& ctx, TelemetryLog& log,
                             std::size_t max_in_flight) {
    if (max_in_flight < 1) max_in_flight = 1;
    std::counting_semaphore<> slots(static_cast<std::ptrdiff_t>(max_in_flight));

    std::vector<std::future<BatchItem>> futures;
    futures.reserve(manifest.size());
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const ManifestEntry& entry = manifest[i];
        slots.acquire();
        futures.push_back(std::async(std::launch::async, [&, entry, i] {
            struct Release {
                std::counting_semaphore<>& s;
                ~Release() { s.release(); }
            } release{slots};
            BatchItem item;
            item.entry = entry;
            try {
                item.output = run_pipeline(entry, ctx,
                                           static_cast<std::int64_t>(i % 65536));
            } catch (const PipelineStageError& e) {
                item.failed_stage = e.stage();
                item.error_name = errc_name(e.code());
                item.error_message = e.message();
            } catch (const Error& e) {
                item.failed_stage = "unknown";
                item.error_name = errc_name(e.code());
                item.error_message = e.message();
            } catch (const std::exception& e) {
                item.failed_stage = "unknown";
                item.error_name = "Unexpected";
                item.error_message = e.what();
            }
            return item;
        }));
    }

    std::unique_ptr<std::ofstream> errors_out;
    BatchResult result;
    for (auto& future : futures) {
        BatchItem item = future.get();
        if (item.output) {
            ++result.succeeded;
            for (const RequestRecord& r : item.output->request_records)
                log.record_request(r);
        } else {
            ++result.failed;
            if (!ctx.output_dir.empty()) {
                if (!errors_out)
                    errors_out = std::make_unique<std::ofstream>(
                        ctx.output_dir + "/errors.jsonl",
                        std::ios::app | std::ios::binary);
                const nlohmann::json line = {{"image_id", item.entry.image_id},
                                             {"stage", item.failed_stage},
                                             {"error", item.error_name},
                                             {"message", item.error_message}};
                *errors_out << line.dump() << '\n';
            }
        }
        result.items.push_back(std::move(item));
    }
    return result;
}

}  // namespace denmpipe
