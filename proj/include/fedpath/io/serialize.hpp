// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <zlib.h>

#include "fedpath/core/error.hpp"
#include "fedpath/nn/params.hpp"

namespace fedpath::io {

// "FPSW1" parameter payload: magic, then a length-prefixed segment list
// (name, shape, little-endian f32 data), then a CRC32 of all preceding
// payload bytes. Round-trips are bitwise.
constexpr char kParamsMagic[5] = {'F', 'P', 'S', 'W', '1'};

namespace detail {

template <typename T>
void put(std::vector<uint8_t>& buf, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    size_t off = buf.size();
    buf.resize(off + sizeof(T));
    std::memcpy(buf.data() + off, &v, sizeof(T));
}

template <typename T>
T get(const std::vector<uint8_t>& buf, size_t& off) {
    if (off + sizeof(T) > buf.size()) throw IoError("parameter payload truncated");
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

}  // namespace detail

inline std::vector<uint8_t> encode_params(const nn::ParamVector& params) {
    std::vector<uint8_t> buf;
    buf.insert(buf.end(), kParamsMagic, kParamsMagic + 5);
    detail::put<uint32_t>(buf, static_cast<uint32_t>(params.segments.size()));
    for (const auto& s : params.segments) {
        detail::put<uint32_t>(buf, static_cast<uint32_t>(s.name.size()));
        buf.insert(buf.end(), s.name.begin(), s.name.end());
        detail::put<uint32_t>(buf, static_cast<uint32_t>(s.shape.size()));
        for (int d : s.shape) detail::put<int32_t>(buf, d);
        detail::put<uint64_t>(buf, static_cast<uint64_t>(s.data.size()));
        size_t off = buf.size();
        buf.resize(off + s.data.size() * sizeof(float));
        std::memcpy(buf.data() + off, s.data.data(), s.data.size() * sizeof(float));
    }
    uint32_t crc = static_cast<uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(buf.size())));
    detail::put<uint32_t>(buf, crc);
    return buf;
}

inline nn::ParamVector decode_params(const std::vector<uint8_t>& buf, size_t offset = 0,
                                     size_t* end_offset = nullptr) {
    size_t off = offset;
    if (off + 5 > buf.size() || std::memcmp(buf.data() + off, kParamsMagic, 5) != 0) {
        throw IoError("bad parameter payload magic");
    }
    const size_t payload_start = off;
    off += 5;
    uint32_t n_seg = detail::get<uint32_t>(buf, off);
    nn::ParamVector params;
    params.segments.reserve(n_seg);
    for (uint32_t i = 0; i < n_seg; ++i) {
        nn::ParamSegment seg;
        uint32_t name_len = detail::get<uint32_t>(buf, off);
        if (off + name_len > buf.size()) throw IoError("parameter payload truncated");
        seg.name.assign(reinterpret_cast<const char*>(buf.data() + off), name_len);
        off += name_len;
        uint32_t ndim = detail::get<uint32_t>(buf, off);
        seg.shape.resize(ndim);
        for (uint32_t d = 0; d < ndim; ++d) seg.shape[d] = detail::get<int32_t>(buf, off);
        uint64_t count = detail::get<uint64_t>(buf, off);
        if (off + count * sizeof(float) > buf.size()) throw IoError("parameter payload truncated");
        seg.data.resize(count);
        std::memcpy(seg.data.data(), buf.data() + off, count * sizeof(float));
        off += count * sizeof(float);
        params.segments.push_back(std::move(seg));
    }
    uint32_t expect = static_cast<uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(buf.data() + payload_start),
              static_cast<uInt>(off - payload_start)));
    uint32_t stored = detail::get<uint32_t>(buf, off);
    if (stored != expect) throw IoError("parameter payload CRC mismatch");
    if (end_offset) *end_offset = off;
    return params;
}

}  // namespace fedpath::io
