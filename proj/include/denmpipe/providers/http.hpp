#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "denmpipe/providers/depth.hpp"
#include "denmpipe/providers/model.hpp"

namespace denmpipe {

/// Generic multimodal completion endpoint. The auth token is read from
/// the named environment variable at call time; request parameters the
/// endpoint understands beyond the standard ones ride along opaquely in
/// `extra`.
struct EndpointConfig {
    std::string url;       // http://host:port/path
    std::string model_id;
    std::string auth_env;  // name of the env var holding the bearer token
    std::int64_t timeout_ms = 30000;
    nlohmann::json extra = nlohmann::json::object();
};

namespace detail {

struct SplitUrl {
    std::string base;  // scheme://host:port
    std::string path;
};

inline SplitUrl split_url(const std::string& url) {
    const std::size_t scheme = url.find("://");
    if (scheme == std::string::npos)
        throw Error(Errc::bad_config, "endpoint URL '" + url + "' has no scheme");
    const std::size_t slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

inline std::string base64_encode(const std::vector<std::uint8_t>& data) {
    static const char table[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        std::uint32_t chunk = std::uint32_t(data[i]) << 16;
        if (i + 1 < data.size()) chunk |= std::uint32_t(data[i + 1]) << 8;
        if (i + 2 < data.size()) chunk |= std::uint32_t(data[i + 2]);
        out.push_back(table[(chunk >> 18) & 63]);
        out.push_back(table[(chunk >> 12) & 63]);
        out.push_back(i + 1 < data.size() ? table[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < data.size() ? table[chunk & 63] : '=');
    }
    return out;
}

inline void configure_timeouts(httplib::Client& client, std::int64_t timeout_ms) {
    const time_t sec = timeout_ms / 1000;
    const time_t usec = (timeout_ms % 1000) * 1000;
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);
}

inline bool is_timeout(httplib::Error err) {
    return err == httplib::Error::ConnectionTimeout ||
           err == httplib::Error::Read || err == httplib::Error::Write;
}

}  // namespace detail

/// One completion request per call; no retries at this layer. Token
/// counts come from the endpoint's usage metadata when present, else
/// stay -1 (unknown). Latency is measured locally around the exchange.
class HttpModelProvider : public ModelProvider {
public:
    explicit HttpModelProvider(EndpointConfig config) : config_(std::move(config)) {}

    ModelResponse complete(const ModelRequest& request) override {
        const char* token =
            config_.auth_env.empty() ? "" : std::getenv(config_.auth_env.c_str());
        if (!config_.auth_env.empty() && token == nullptr)
            throw Error(Errc::auth_missing,
                        "environment variable '" + config_.auth_env + "' is not set",
                        config_.auth_env);

        nlohmann::json body = {{"model", config_.model_id},
                               {"prompt", request.prompt}};
        if (request.image != nullptr && !request.image->bytes.empty()) {
            body["image_b64"] = detail::base64_encode(request.image->bytes);
            body["image_mime"] = request.image->mime;
        }
        for (const auto& [k, v] : config_.extra.items()) body[k] = v;

        const auto [base, path] = detail::split_url(config_.url);
        httplib::Client client(base);
        detail::configure_timeouts(client, config_.timeout_ms);
        httplib::Headers headers;
        if (token != nullptr && *token != '\0')
            headers.emplace("Authorization", std::string("Bearer ") + token);

        const auto started = std::chrono::steady_clock::now();
        httplib::Result res =
            client.Post(path, headers, body.dump(), "application/json");
        const auto elapsed_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started)
                .count();

        if (!res) {
            if (detail::is_timeout(res.error()))
                throw Error(Errc::timeout,
                            "no response within " +
                                std::to_string(config_.timeout_ms) + " ms from " +
                                config_.url);
            throw Error(Errc::provider_error,
                        "transport failure talking to " + config_.url + ": " +
                            httplib::to_string(res.error()));
        }
        if (res->status != 200)
            throw Error(Errc::http_status,
                        "endpoint returned status " + std::to_string(res->status),
                        {}, res->status);

        ModelResponse out;
        out.model_id = config_.model_id;
        out.latency_ms = elapsed_ms;
        try {
            const nlohmann::json doc = nlohmann::json::parse(res->body);
            out.text = doc.at("text").get<std::string>();
            if (doc.contains("usage")) {
                out.prompt_tokens =
                    doc["usage"].value("prompt_tokens", std::int64_t{-1});
                out.completion_tokens =
                    doc["usage"].value("completion_tokens", std::int64_t{-1});
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::provider_error,
                        std::string("malformed endpoint response: ") + e.what());
        }
        return out;
    }

private:
    EndpointConfig config_;
};

/// Remote depth service: posts the raw image, expects a P-DEPTH grid back.
class HttpDepthProvider : public DepthProvider {
public:
    explicit HttpDepthProvider(EndpointConfig config) : config_(std::move(config)) {}

    DepthResult depth_for(const ImageRef& image) override {
        const auto [base, path] = detail::split_url(config_.url);
        httplib::Client client(base);
        detail::configure_timeouts(client, config_.timeout_ms);
        const std::string body(image.bytes.begin(), image.bytes.end());
        httplib::Result res = client.Post(path, body, image.mime);
        if (!res) {
            if (detail::is_timeout(res.error()))
                throw Error(Errc::timeout,
                            "no response within " +
                                std::to_string(config_.timeout_ms) + " ms from " +
                                config_.url);
            throw Error(Errc::provider_error,
                        "transport failure talking to " + config_.url + ": " +
                            httplib::to_string(res.error()));
        }
        if (res->status != 200)
            throw Error(Errc::http_status,
                        "depth endpoint returned status " +
                            std::to_string(res->status),
                        {}, res->status);
        return parse_depth_grid(res->body);
    }

private:
    EndpointConfig config_;
};

}  // namespace denmpipe
