#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>

#include <json.hpp>

#include "denmpipe/providers/model.hpp"

namespace denmpipe {

/// Pre-recorded model responses keyed by (fixture id, stage). A bundle is
/// a directory of `<fixture_id>.<stage>.json` files, each holding one
/// ModelResponse verbatim, including its token and latency numbers.
/// Read-only after load, so safe for concurrent replay.
class ReplayBundle {
public:
    static ReplayBundle load(const std::string& dir) {
        namespace fs = std::filesystem;
        if (!fs::is_directory(dir))
            throw Error(Errc::io_error, "replay bundle '" + dir + "' is not a directory");
        ReplayBundle bundle;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (name.size() < 6 || name.substr(name.size() - 5) != ".json") continue;
            const std::string stem = name.substr(0, name.size() - 5);
            const std::size_t dot = stem.rfind('.');
            if (dot == std::string::npos) continue;
            const std::string fixture_id = stem.substr(0, dot);
            const Stage stage = stage_from_string(stem.substr(dot + 1));
            std::ifstream in(entry.path());
            nlohmann::json doc;
            try {
                in >> doc;
            } catch (const nlohmann::json::exception& e) {
                throw Error(Errc::bad_format,
                            "replay entry '" + name + "': " + e.what());
            }
            auto key = std::make_pair(fixture_id, stage);
            if (!bundle.entries_.emplace(key, model_response_from_json(doc)).second)
                throw Error(Errc::bad_format, "duplicate replay entry '" + name + "'");
        }
        return bundle;
    }

    const ModelResponse& get(const std::string& fixture_id, Stage stage) const {
        auto it = entries_.find({fixture_id, stage});
        if (it == entries_.end())
            throw Error(Errc::missing_fixture,
                        "no replay entry for (" + fixture_id + ", " +
                            to_string(stage) + ")",
                        fixture_id);
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::pair<std::string, Stage>, ModelResponse> entries_;
};

/// Returns the stored response verbatim, stored token/latency numbers
/// included.
inline ModelResponse replay_complete(const ReplayBundle& bundle,
                                     const std::string& fixture_id, Stage stage) {
    return bundle.get(fixture_id, stage);
}

class ReplayProvider : public ModelProvider {
public:
    explicit ReplayProvider(ReplayBundle bundle) : bundle_(std::move(bundle)) {}

    ModelResponse complete(const ModelRequest& request) override {
        if (request.image == nullptr)
            throw Error(Errc::provider_error, "replay request carries no image");
        return replay_complete(bundle_, request.image->image_id, request.stage);
    }

    const ReplayBundle& bundle() const { return bundle_; }

private:
    ReplayBundle bundle_;
};

}  // namespace denmpipe
