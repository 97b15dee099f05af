#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "denmpipe/denm/build.hpp"
#include "denmpipe/errors.hpp"
#include "denmpipe/providers/http.hpp"

namespace denmpipe {

/// Flat key = value configuration file: one pair per line, '#' comments,
/// values optionally double-quoted. Flags given on the command line
/// override file values.
inline std::map<std::string, std::string> parse_flat_config(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read config '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r\n";
        const auto begin = s.find_first_not_of(ws);
        if (begin == std::string::npos) return std::string{};
        const auto end = s.find_last_not_of(ws);
        return s.substr(begin, end - begin + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::bad_config,
                        "line " + std::to_string(lineno) + " has no '=': '" +
                            stripped + "'");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw Error(Errc::bad_config,
                        "line " + std::to_string(lineno) + " has an empty key");
        out[key] = value;
    }
    return out;
}

/// Everything a batch run needs. Exactly one model-provider source must
/// be configured (a replay bundle or an HTTP endpoint), and likewise one
/// depth source.
struct RunConfig {
    std::string manifest;
    std::string cameras;
    std::string prompts;
    std::string output_dir;
    std::string telemetry;  // defaults to <output_dir>/telemetry.jsonl

    std::string provider;  // "replay" | "http"
    std::string replay_bundle;
    EndpointConfig endpoint;

    std::string depth_dir;
    std::string depth_url;
    std::int64_t depth_timeout_ms = 30000;

    std::string registry_file;
    std::string lane_status_polarity = "zero_closed";
    BuildOptions build_options;
    bool strict_ranges = false;

    std::size_t max_in_flight = 1;
    std::optional<std::int64_t> fixed_clock;
};

namespace detail {

inline std::int64_t to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::bad_config, "'" + key + "' must be an integer, got '" +
                                      value + "'");
}

inline std::string resolve(const std::filesystem::path& base,
                           const std::string& value) {
    if (value.empty()) return value;
    std::filesystem::path p(value);
    return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

}  // namespace detail

/// Builds a RunConfig from a parsed key/value map. Relative paths are
/// resolved against `base_dir` (the config file's directory, or the
/// working directory for command-line overrides).
inline void apply_config_pairs(RunConfig& config,
                               const std::map<std::string, std::string>& pairs,
                               const std::string& base_dir) {
    const std::filesystem::path base(base_dir);
    for (const auto& [key, value] : pairs) {
        if (key == "manifest") config.manifest = detail::resolve(base, value);
        else if (key == "cameras") config.cameras = detail::resolve(base, value);
        else if (key == "prompts") config.prompts = detail::resolve(base, value);
        else if (key == "out") config.output_dir = detail::resolve(base, value);
        else if (key == "telemetry") config.telemetry = detail::resolve(base, value);
        else if (key == "provider") config.provider = value;
        else if (key == "replay_bundle")
            config.replay_bundle = detail::resolve(base, value);
        else if (key == "endpoint_url") config.endpoint.url = value;
        else if (key == "model_id") config.endpoint.model_id = value;
        else if (key == "auth_env") config.endpoint.auth_env = value;
        else if (key == "timeout_ms")
            config.endpoint.timeout_ms = detail::to_int(key, value);
        else if (key == "depth_dir") config.depth_dir = detail::resolve(base, value);
        else if (key == "depth_url") config.depth_url = value;
        else if (key == "depth_timeout_ms")
            config.depth_timeout_ms = detail::to_int(key, value);
        else if (key == "registry")
            config.registry_file = detail::resolve(base, value);
        else if (key == "lane_status_polarity") config.lane_status_polarity = value;
        else if (key == "validity_duration_s")
            config.build_options.validity_duration_s = detail::to_int(key, value);
        else if (key == "station_type")
            config.build_options.station_type = detail::to_int(key, value);
        else if (key == "information_quality")
            config.build_options.information_quality = detail::to_int(key, value);
        else if (key == "strict_ranges")
            config.strict_ranges = (value == "1" || value == "true");
        else if (key == "max_in_flight")
            config.max_in_flight =
                static_cast<std::size_t>(detail::to_int(key, value));
        else if (key == "fixed_clock")
            config.fixed_clock = detail::to_int(key, value);
        else
            throw Error(Errc::bad_config, "unknown config key '" + key + "'");
    }
}

inline void validate_run_config(RunConfig& config) {
    namespace fs = std::filesystem;
    if (config.provider != "replay" && config.provider != "http")
        throw Error(Errc::bad_config,
                    "provider must be 'replay' or 'http', got '" +
                        config.provider + "'");
    const bool has_replay = !config.replay_bundle.empty();
    const bool has_endpoint = !config.endpoint.url.empty();
    if (config.provider == "replay" && (!has_replay || has_endpoint))
        throw Error(Errc::bad_config,
                    "replay provider needs replay_bundle and no endpoint_url");
    if (config.provider == "http" && (has_replay || !has_endpoint))
        throw Error(Errc::bad_config,
                    "http provider needs endpoint_url and no replay_bundle");
    if (config.depth_dir.empty() == config.depth_url.empty())
        throw Error(Errc::bad_config,
                    "exactly one of depth_dir / depth_url must be set");
    if (config.lane_status_polarity == "one_closed")
        config.build_options.etsi_lane_polarity = true;
    else if (config.lane_status_polarity != "zero_closed")
        throw Error(Errc::bad_config,
                    "lane_status_polarity must be zero_closed or one_closed");
    if (config.max_in_flight < 1)
        throw Error(Errc::bad_config, "max_in_flight must be >= 1");

    for (const auto& [name, path] :
         {std::pair<const char*, const std::string&>{"manifest", config.manifest},
          {"cameras", config.cameras},
          {"prompts", config.prompts}})
        if (path.empty() || !fs::exists(path))
            throw Error(Errc::bad_config, std::string(name) + " path '" + path +
                                              "' does not exist");
    if (!config.replay_bundle.empty() && !fs::is_directory(config.replay_bundle))
        throw Error(Errc::bad_config,
                    "replay_bundle '" + config.replay_bundle + "' does not exist");
    if (!config.depth_dir.empty() && !fs::is_directory(config.depth_dir))
        throw Error(Errc::bad_config,
                    "depth_dir '" + config.depth_dir + "' does not exist");
    if (config.output_dir.empty())
        throw Error(Errc::bad_config, "output directory must be set");
    if (config.telemetry.empty())
        config.telemetry = config.output_dir + "/telemetry.jsonl";
}

}  // namespace denmpipe
