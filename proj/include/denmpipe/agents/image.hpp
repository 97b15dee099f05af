#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "denmpipe/errors.hpp"

namespace denmpipe {

/// Opaque handle to one camera frame: raw bytes plus sniffed pixel
/// dimensions. Dimensions are required only once a detection needs the
/// bounding-box transform; width == 0 marks an unrecognized container.
struct ImageRef {
    std::string image_id;
    std::string path;
    std::vector<std::uint8_t> bytes;
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::string mime = "application/octet-stream";
};

namespace detail {

// Minimal dimension sniffing for PGM/PPM, PNG and JPEG headers.
inline bool sniff_netpbm(const std::vector<std::uint8_t>& b, std::int64_t& w,
                         std::int64_t& h) {
    if (b.size() < 2 || b[0] != 'P') return false;
    const char kind = static_cast<char>(b[1]);
    if (kind < '1' || kind > '6') return false;
    std::size_t i = 2;
    auto skip_ws = [&] {
        while (i < b.size()) {
            if (b[i] == '#') {
                while (i < b.size() && b[i] != '\n') ++i;
            } else if (std::isspace(b[i])) {
                ++i;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> std::int64_t {
        skip_ws();
        std::int64_t v = 0;
        bool any = false;
        while (i < b.size() && b[i] >= '0' && b[i] <= '9') {
            v = v * 10 + (b[i] - '0');
            ++i;
            any = true;
        }
        return any ? v : -1;
    };
    w = read_int();
    h = read_int();
    return w > 0 && h > 0;
}

inline bool sniff_png(const std::vector<std::uint8_t>& b, std::int64_t& w,
                      std::int64_t& h) {
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (b.size() < 24 || !std::equal(sig, sig + 8, b.begin())) return false;
    auto be32 = [&](std::size_t off) {
        return (std::int64_t(b[off]) << 24) | (std::int64_t(b[off + 1]) << 16) |
               (std::int64_t(b[off + 2]) << 8) | std::int64_t(b[off + 3]);
    };
    w = be32(16);
    h = be32(20);
    return w > 0 && h > 0;
}

inline bool sniff_jpeg(const std::vector<std::uint8_t>& b, std::int64_t& w,
                       std::int64_t& h) {
    if (b.size() < 4 || b[0] != 0xFF || b[1] != 0xD8) return false;
    std::size_t i = 2;
    while (i + 9 < b.size()) {
        if (b[i] != 0xFF) return false;
        const std::uint8_t marker = b[i + 1];
        if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD9)) {
            i += 2;
            continue;
        }
        const std::size_t seg = (std::size_t(b[i + 2]) << 8) | b[i + 3];
        if ((marker >= 0xC0 && marker <= 0xC3) ||
            (marker >= 0xC5 && marker <= 0xC7) ||
            (marker >= 0xC9 && marker <= 0xCB) ||
            (marker >= 0xCD && marker <= 0xCF)) {
            h = (std::int64_t(b[i + 5]) << 8) | b[i + 6];
            w = (std::int64_t(b[i + 7]) << 8) | b[i + 8];
            return w > 0 && h > 0;
        }
        i += 2 + seg;
    }
    return false;
}

inline std::string mime_from_bytes(const std::vector<std::uint8_t>& b) {
    std::int64_t w, h;
    if (sniff_png(b, w, h)) return "image/png";
    if (sniff_jpeg(b, w, h)) return "image/jpeg";
    if (b.size() >= 2 && b[0] == 'P' && (b[1] == '2' || b[1] == '5'))
        return "image/x-portable-graymap";
    if (b.size() >= 2 && b[0] == 'P' && (b[1] == '3' || b[1] == '6'))
        return "image/x-portable-pixmap";
    return "application/octet-stream";
}

}  // namespace detail

inline ImageRef load_image(const std::string& path, const std::string& image_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read image '" + path + "'");
    ImageRef ref;
    ref.image_id = image_id;
    ref.path = path;
    ref.bytes.assign(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
    detail::sniff_netpbm(ref.bytes, ref.width, ref.height) ||
        detail::sniff_png(ref.bytes, ref.width, ref.height) ||
        detail::sniff_jpeg(ref.bytes, ref.width, ref.height);
    ref.mime = detail::mime_from_bytes(ref.bytes);
    return ref;
}

}  // namespace denmpipe
