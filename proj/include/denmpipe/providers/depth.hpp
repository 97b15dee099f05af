#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "denmpipe/agents/image.hpp"
#include "denmpipe/errors.hpp"

namespace denmpipe {

/// Dense metric depth map in meters, row-major. NaN marks pixels the
/// estimator could not resolve.
struct DepthResult {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<double> depths_m;

    double at(std::int64_t x, std::int64_t y) const {
        return depths_m[static_cast<std::size_t>(y * width + x)];
    }
};

// Grid file format: text header "P-DEPTH <width> <height>", then
// width*height whitespace-separated values in row-major order. "nan"
// marks invalid pixels; all finite values must be positive.
inline DepthResult parse_depth_grid(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    in >> magic;
    if (magic != "P-DEPTH")
        throw Error(Errc::bad_format, "missing P-DEPTH header, got '" + magic + "'");
    std::int64_t width = 0, height = 0;
    if (!(in >> width >> height) || width <= 0 || height <= 0)
        throw Error(Errc::bad_format, "invalid grid dimensions");

    DepthResult result;
    result.width = width;
    result.height = height;
    result.depths_m.reserve(static_cast<std::size_t>(width * height));
    std::string token;
    while (in >> token) {
        double value;
        std::string lower = token;
        for (char& c : lower) c = static_cast<char>(std::tolower(c));
        if (lower == "nan") {
            value = std::numeric_limits<double>::quiet_NaN();
        } else {
            try {
                std::size_t used = 0;
                value = std::stod(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw Error(Errc::bad_format, "not a number: '" + token + "'");
            }
            if (!(value > 0.0))
                throw Error(Errc::bad_format,
                            "depth values must be > 0 or nan, got " + token);
        }
        result.depths_m.push_back(value);
    }
    if (result.depths_m.size() != static_cast<std::size_t>(width * height))
        throw Error(Errc::dimension_mismatch,
                    "header declares " + std::to_string(width * height) +
                        " values, body has " +
                        std::to_string(result.depths_m.size()));
    return result;
}

inline DepthResult depth_from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read depth grid '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_depth_grid(text);
}

/// Metric depth estimation contract; implementations must tolerate
/// concurrent calls.
class DepthProvider {
public:
    virtual ~DepthProvider() = default;
    virtual DepthResult depth_for(const ImageRef& image) = 0;
};

/// Replays pre-computed grids from `<dir>/<image_id>.pdepth`.
class FileDepthProvider : public DepthProvider {
public:
    explicit FileDepthProvider(std::string dir) : dir_(std::move(dir)) {}

    DepthResult depth_for(const ImageRef& image) override {
        return depth_from_file(dir_ + "/" + image.image_id + ".pdepth");
    }

private:
    std::string dir_;
};

}  // namespace denmpipe
