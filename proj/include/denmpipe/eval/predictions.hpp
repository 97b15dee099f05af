#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "denmpipe/agents/types.hpp"
#include "denmpipe/denm/json.hpp"
#include "denmpipe/errors.hpp"
#include "denmpipe/eval/metrics.hpp"

namespace denmpipe {

struct LoadedPredictions {
    std::map<std::string, SituationType> detection;
    std::map<std::string, FieldPrediction> fields;  // only detected frames
};

/// Reads a pipeline output directory back into scoreable form: one
/// `<image_id>.detect.json` verdict per frame, and for detected frames
/// the field values from `<image_id>.denm.json`.
inline LoadedPredictions load_predictions(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw Error(Errc::io_error, "prediction directory '" + dir + "' missing");
    LoadedPredictions out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const std::string suffix = ".detect.json";
        if (name.size() <= suffix.size() ||
            name.substr(name.size() - suffix.size()) != suffix)
            continue;
        std::ifstream in(entry.path());
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::bad_format, name + ": " + e.what());
        }
        const std::string image_id = doc.at("image_id").get<std::string>();
        const std::string verdict = doc.at("situation_type").get<std::string>();
        out.detection[image_id] = verdict == "DENM" ? SituationType::DENM
                                                    : SituationType::NONE;
        if (verdict != "DENM") continue;

        const fs::path denm_path =
            entry.path().parent_path() / (image_id + ".denm.json");
        FieldPrediction fields;
        if (fs::exists(denm_path)) {
            const Denm denm = read_denm_json_file(denm_path.string());
            if (denm.alacarte) {
                fields.number_of_lanes = denm.alacarte->number_of_lanes;
                fields.driving_lane_status = denm.alacarte->driving_lane_status;
            }
            if (denm.situation) fields.cause_code = denm.situation->cause_code;
        }
        out.fields[image_id] = fields;
    }
    return out;
}

}  // namespace denmpipe
