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
#include "fedpath/io/file.hpp"

namespace fedpath::io {

// Minimal ZIP reader: stored and deflate entries, no zip64, no encryption.
// Enough for archive ingestion of PNG trees.

struct ZipEntry {
    std::string name;
    std::vector<uint8_t> bytes;
};

namespace detail {

inline uint16_t le16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

inline uint32_t le32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

inline std::vector<uint8_t> inflate_raw(const uint8_t* src, size_t src_len,
                                        size_t out_len) {
    std::vector<uint8_t> out(out_len);
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw IoError("zip: inflateInit failed");
    zs.next_in = const_cast<Bytef*>(src);
    zs.avail_in = static_cast<uInt>(src_len);
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != out_len) {
        throw IoError("zip: inflate failed");
    }
    return out;
}

}  // namespace detail

inline std::vector<ZipEntry> read_zip(const std::filesystem::path& path) {
    std::vector<uint8_t> buf = read_file(path);
    if (buf.size() < 22) throw IoError("zip: file too small: " + path.string());

    // End-of-central-directory record: scan backwards over the comment.
    size_t eocd = std::string::npos;
    size_t scan_from = buf.size() >= 22 + 65535 ? buf.size() - 22 - 65535 : 0;
    for (size_t i = buf.size() - 22 + 1; i-- > scan_from;) {
        if (buf[i] == 0x50 && buf[i + 1] == 0x4b && buf[i + 2] == 0x05 && buf[i + 3] == 0x06) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string::npos) throw IoError("zip: end of central directory not found");

    uint16_t n_entries = detail::le16(buf.data() + eocd + 10);
    uint32_t cd_offset = detail::le32(buf.data() + eocd + 16);

    std::vector<ZipEntry> entries;
    size_t off = cd_offset;
    for (uint16_t e = 0; e < n_entries; ++e) {
        if (off + 46 > buf.size() || detail::le32(buf.data() + off) != 0x02014b50) {
            throw IoError("zip: bad central directory entry");
        }
        uint16_t method = detail::le16(buf.data() + off + 10);
        uint32_t comp_size = detail::le32(buf.data() + off + 20);
        uint32_t uncomp_size = detail::le32(buf.data() + off + 24);
        uint16_t name_len = detail::le16(buf.data() + off + 28);
        uint16_t extra_len = detail::le16(buf.data() + off + 30);
        uint16_t comment_len = detail::le16(buf.data() + off + 32);
        uint32_t local_off = detail::le32(buf.data() + off + 42);
        std::string name(reinterpret_cast<const char*>(buf.data() + off + 46), name_len);
        off += 46u + name_len + extra_len + comment_len;

        if (!name.empty() && name.back() == '/') continue;  // directory entry

        if (local_off + 30 > buf.size() ||
            detail::le32(buf.data() + local_off) != 0x04034b50) {
            throw IoError("zip: bad local header for " + name);
        }
        uint16_t lname = detail::le16(buf.data() + local_off + 26);
        uint16_t lextra = detail::le16(buf.data() + local_off + 28);
        size_t data_off = local_off + 30u + lname + lextra;
        if (data_off + comp_size > buf.size()) throw IoError("zip: truncated entry " + name);

        ZipEntry entry;
        entry.name = name;
        if (method == 0) {
            entry.bytes.assign(buf.begin() + static_cast<std::ptrdiff_t>(data_off),
                               buf.begin() + static_cast<std::ptrdiff_t>(data_off + comp_size));
        } else if (method == 8) {
            entry.bytes = detail::inflate_raw(buf.data() + data_off, comp_size, uncomp_size);
        } else {
            throw IoError("zip: unsupported compression method for " + name);
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace fedpath::io
