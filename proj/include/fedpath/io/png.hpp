// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <zlib.h>

#include "fedpath/core/error.hpp"
#include "fedpath/imaging/image.hpp"
#include "fedpath/io/file.hpp"

namespace fedpath::io {

// Minimal PNG codec over zlib. Writes 8-bit RGB, non-interlaced, Paeth
// filtered. Reads 8-bit grayscale/RGB/RGBA (converted to RGB); palette and
// interlaced files are rejected.

namespace detail {

inline uint32_t be32(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

inline void put_be32(std::vector<uint8_t>& buf, uint32_t v) {
    buf.push_back(static_cast<uint8_t>(v >> 24));
    buf.push_back(static_cast<uint8_t>(v >> 16));
    buf.push_back(static_cast<uint8_t>(v >> 8));
    buf.push_back(static_cast<uint8_t>(v));
}

inline void put_chunk(std::vector<uint8_t>& out, const char type[4],
                      const uint8_t* data, size_t len) {
    put_be32(out, static_cast<uint32_t>(len));
    size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data, data + len);
    uint32_t crc = static_cast<uint32_t>(
        crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + len)));
    put_be32(out, crc);
}

inline uint8_t paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<uint8_t>(a);
    if (pb <= pc) return static_cast<uint8_t>(b);
    return static_cast<uint8_t>(c);
}

constexpr uint8_t kPngSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

}  // namespace detail

inline std::vector<uint8_t> encode_png(const img::ImageU8& image) {
    const int w = image.width, h = image.height;
    const size_t stride = static_cast<size_t>(w) * 3;

    // Paeth-filter every scanline.
    std::vector<uint8_t> raw(static_cast<size_t>(h) * (stride + 1));
    for (int y = 0; y < h; ++y) {
        uint8_t* dst = raw.data() + static_cast<size_t>(y) * (stride + 1);
        *dst++ = 4;
        const uint8_t* cur = image.data.data() + static_cast<size_t>(y) * stride;
        const uint8_t* up = y > 0 ? cur - stride : nullptr;
        for (size_t i = 0; i < stride; ++i) {
            int a = i >= 3 ? cur[i - 3] : 0;
            int b = up ? up[i] : 0;
            int c = (up && i >= 3) ? up[i - 3] : 0;
            dst[i] = static_cast<uint8_t>(cur[i] - detail::paeth(a, b, c));
        }
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> comp(comp_len);
    if (compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw IoError("png: deflate failed");
    }
    comp.resize(comp_len);

    std::vector<uint8_t> out(detail::kPngSig, detail::kPngSig + 8);
    uint8_t ihdr[13];
    ihdr[0] = static_cast<uint8_t>(w >> 24);
    ihdr[1] = static_cast<uint8_t>(w >> 16);
    ihdr[2] = static_cast<uint8_t>(w >> 8);
    ihdr[3] = static_cast<uint8_t>(w);
    ihdr[4] = static_cast<uint8_t>(h >> 24);
    ihdr[5] = static_cast<uint8_t>(h >> 16);
    ihdr[6] = static_cast<uint8_t>(h >> 8);
    ihdr[7] = static_cast<uint8_t>(h);
    ihdr[8] = 8;   // bit depth
    ihdr[9] = 2;   // color type: truecolor
    ihdr[10] = 0;  // compression
    ihdr[11] = 0;  // filter
    ihdr[12] = 0;  // no interlacing
    detail::put_chunk(out, "IHDR", ihdr, 13);
    detail::put_chunk(out, "IDAT", comp.data(), comp.size());
    detail::put_chunk(out, "IEND", nullptr, 0);
    return out;
}

inline img::ImageU8 decode_png(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 8) throw IoError("png: truncated file");
    if (std::memcmp(bytes.data(), detail::kPngSig, 8) != 0) {
        throw IoError("png: bad signature");
    }
    size_t off = 8;
    int w = 0, h = 0, color_type = -1, channels = 0;
    std::vector<uint8_t> idat;
    bool done = false;
    while (!done) {
        if (off + 8 > bytes.size()) throw IoError("png: truncated chunk header");
        uint32_t len = detail::be32(bytes.data() + off);
        const uint8_t* type = bytes.data() + off + 4;
        if (off + 12 + len > bytes.size()) throw IoError("png: truncated chunk");
        const uint8_t* data = bytes.data() + off + 8;
        uint32_t expect = detail::be32(data + len);
        uint32_t actual = static_cast<uint32_t>(
            crc32(0L, bytes.data() + off + 4, static_cast<uInt>(4 + len)));
        if (expect != actual) throw IoError("png: chunk CRC mismatch");

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw IoError("png: bad IHDR");
            w = static_cast<int>(detail::be32(data));
            h = static_cast<int>(detail::be32(data + 4));
            int bit_depth = data[8];
            color_type = data[9];
            int interlace = data[12];
            if (bit_depth != 8) throw IoError("png: only 8-bit depth supported");
            if (interlace != 0) throw IoError("png: interlaced files not supported");
            switch (color_type) {
                case 0: channels = 1; break;
                case 2: channels = 3; break;
                case 6: channels = 4; break;
                default: throw IoError("png: unsupported color type " + std::to_string(color_type));
            }
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            done = true;
        }
        off += 12 + len;
    }
    if (w < 1 || h < 1 || channels == 0) throw IoError("png: missing IHDR");
    if (idat.empty()) throw IoError("png: missing IDAT");

    const size_t stride = static_cast<size_t>(w) * channels;
    std::vector<uint8_t> raw(static_cast<size_t>(h) * (stride + 1));
    uLongf raw_len = static_cast<uLongf>(raw.size());
    int zr = uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size()));
    if (zr != Z_OK || raw_len != raw.size()) throw IoError("png: inflate failed");

    // Undo per-row filtering in place.
    std::vector<uint8_t> prior(stride, 0);
    img::ImageU8 out(w, h);
    std::vector<uint8_t> cur(stride);
    for (int y = 0; y < h; ++y) {
        const uint8_t* src = raw.data() + static_cast<size_t>(y) * (stride + 1);
        uint8_t filter = src[0];
        const uint8_t* f = src + 1;
        for (size_t i = 0; i < stride; ++i) {
            int a = i >= static_cast<size_t>(channels) ? cur[i - channels] : 0;
            int b = prior[i];
            int c = i >= static_cast<size_t>(channels) ? prior[i - channels] : 0;
            int v;
            switch (filter) {
                case 0: v = f[i]; break;
                case 1: v = f[i] + a; break;
                case 2: v = f[i] + b; break;
                case 3: v = f[i] + ((a + b) >> 1); break;
                case 4: v = f[i] + detail::paeth(a, b, c); break;
                default: throw IoError("png: bad filter type");
            }
            cur[i] = static_cast<uint8_t>(v);
        }
        uint8_t* dst = out.px(0, y);
        if (channels == 3) {
            std::memcpy(dst, cur.data(), stride);
        } else if (channels == 1) {
            for (int x = 0; x < w; ++x) {
                dst[x * 3] = dst[x * 3 + 1] = dst[x * 3 + 2] = cur[static_cast<size_t>(x)];
            }
        } else {  // RGBA: drop alpha
            for (int x = 0; x < w; ++x) {
                dst[x * 3] = cur[static_cast<size_t>(x) * 4];
                dst[x * 3 + 1] = cur[static_cast<size_t>(x) * 4 + 1];
                dst[x * 3 + 2] = cur[static_cast<size_t>(x) * 4 + 2];
            }
        }
        prior = cur;
    }
    return out;
}

inline void write_png(const std::filesystem::path& path, const img::ImageU8& image) {
    atomic_write_file(path, encode_png(image));
}

inline img::ImageU8 read_png(const std::filesystem::path& path) {
    try {
        return decode_png(read_file(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace fedpath::io
