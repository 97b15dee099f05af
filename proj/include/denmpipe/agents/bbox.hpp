#pragma once

#include <cmath>
#include <cstdint>

#include "denmpipe/agents/types.hpp"
#include "denmpipe/errors.hpp"

namespace denmpipe {

/// Maps a 0..1000 normalized box onto pixel coordinates by rounding,
/// clamping into bounds, and expanding any axis that collapsed to zero
/// width after rounding.
inline PixelBox transform_bbox(const BoxNorm& box, std::int64_t width,
                               std::int64_t height) {
    if (width < 1 || height < 1)
        throw Error(Errc::precondition, "image dimensions must be at least 1x1");
    if (box.ymin >= box.ymax || box.xmin >= box.xmax || box.ymin < 0 ||
        box.xmin < 0 || box.ymax > 1000 || box.xmax > 1000)
        throw Error(Errc::precondition, "normalized box violates its invariants");

    auto scale = [](std::int64_t v, std::int64_t dim) {
        return std::llround(static_cast<double>(v) * static_cast<double>(dim) /
                            1000.0);
    };
    auto clamp = [](std::int64_t v, std::int64_t hi) {
        return v < 0 ? 0 : (v > hi ? hi : v);
    };

    PixelBox px;
    px.x0 = clamp(scale(box.xmin, width), width);
    px.x1 = clamp(scale(box.xmax, width), width);
    px.y0 = clamp(scale(box.ymin, height), height);
    px.y1 = clamp(scale(box.ymax, height), height);
    if (px.x0 == px.x1) {
        if (px.x1 < width)
            ++px.x1;
        else
            --px.x0;
    }
    if (px.y0 == px.y1) {
        if (px.y1 < height)
            ++px.y1;
        else
            --px.y0;
    }
    return px;
}

}  // namespace denmpipe
