#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "denmpipe/agents/image.hpp"
#include "denmpipe/agents/types.hpp"
#include "denmpipe/errors.hpp"
#include "denmpipe/providers/depth.hpp"

namespace denmpipe {

namespace detail {

/// Median with the mean-of-middle-two convention for even counts.
inline double median_of(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace detail

/// Distance to the boxed object: the median of the finite depth values
/// inside the box. When the provider's grid resolution differs from the
/// image, the box is scaled proportionally (kept non-degenerate).
inline double estimate_distance(const ImageRef& image, const PixelBox& box,
                                DepthProvider& provider) {
    const DepthResult depth = provider.depth_for(image);

    std::int64_t x0 = box.x0, x1 = box.x1, y0 = box.y0, y1 = box.y1;
    if (image.width > 0 && image.height > 0 &&
        (depth.width != image.width || depth.height != image.height)) {
        auto rescale = [](std::int64_t v, std::int64_t from, std::int64_t to) {
            return std::llround(static_cast<double>(v) * static_cast<double>(to) /
                                static_cast<double>(from));
        };
        x0 = rescale(box.x0, image.width, depth.width);
        x1 = rescale(box.x1, image.width, depth.width);
        y0 = rescale(box.y0, image.height, depth.height);
        y1 = rescale(box.y1, image.height, depth.height);
    }
    x0 = std::clamp<std::int64_t>(x0, 0, depth.width - 1);
    y0 = std::clamp<std::int64_t>(y0, 0, depth.height - 1);
    x1 = std::clamp<std::int64_t>(x1, x0 + 1, depth.width);
    y1 = std::clamp<std::int64_t>(y1, y0 + 1, depth.height);

    std::vector<double> inside;
    inside.reserve(static_cast<std::size_t>((x1 - x0) * (y1 - y0)));
    for (std::int64_t y = y0; y < y1; ++y)
        for (std::int64_t x = x0; x < x1; ++x) {
            const double v = depth.at(x, y);
            if (std::isfinite(v)) inside.push_back(v);
        }
    if (inside.empty())
        throw Error(Errc::empty_depth,
                    "no finite depth values inside the detection box");
    return detail::median_of(inside);
}

}  // namespace denmpipe
