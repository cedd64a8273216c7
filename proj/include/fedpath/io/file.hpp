// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fedpath/core/error.hpp"

namespace fedpath::io {

inline std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    in.seekg(0, std::ios::end);
    std::streamoff len = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<uint8_t> buf(static_cast<size_t>(len));
    if (len > 0) in.read(reinterpret_cast<char*>(buf.data()), len);
    if (!in) throw IoError("short read on " + path.string());
    return buf;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    auto buf = read_file(path);
    return std::string(buf.begin(), buf.end());
}

// Write-temp + rename. A crash mid-write never corrupts an existing file.
inline void atomic_write_file(const std::filesystem::path& path,
                              const void* data, size_t len) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
        out.flush();
        if (!out) throw IoError("short write on " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

inline void atomic_write_file(const std::filesystem::path& path,
                              const std::vector<uint8_t>& data) {
    atomic_write_file(path, data.data(), data.size());
}

inline void atomic_write_file(const std::filesystem::path& path, const std::string& text) {
    atomic_write_file(path, text.data(), text.size());
}

}  // namespace fedpath::io
