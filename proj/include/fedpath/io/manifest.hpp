// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fedpath/core/error.hpp"
#include "fedpath/imaging/patches.hpp"

namespace fedpath::io {

// JSON-lines manifest: one PatchRecord per line. Field names are part of
// the on-disk contract; dhash is a 16-digit lowercase hex string.

inline std::string dhash_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline uint64_t parse_dhash_hex(const std::string& s) {
    if (s.size() != 16) throw IoError("dhash must be 16 hex digits");
    uint64_t v = 0;
    for (char c : s) {
        v <<= 4;
        if (c >= '0' && c <= '9') {
            v |= static_cast<uint64_t>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            v |= static_cast<uint64_t>(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            v |= static_cast<uint64_t>(c - 'A' + 10);
        } else {
            throw IoError("dhash contains a non-hex character");
        }
    }
    return v;
}

inline nlohmann::json manifest_row(const img::PatchRecord& r) {
    nlohmann::json j;
    j["source_id"] = r.source_id;
    j["grid_x"] = r.grid_x;
    j["grid_y"] = r.grid_y;
    j["magnification"] = img::to_string(r.magnification);
    j["tissue_fraction"] = r.tissue_fraction;
    j["focus_score"] = r.focus_score;
    j["dhash"] = dhash_hex(r.dhash);
    j["label"] = img::to_string(r.label);
    return j;
}

inline img::PatchRecord parse_manifest_row(const std::string& line, int line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
        img::PatchRecord r;
        r.source_id = j.at("source_id").get<std::string>();
        r.grid_x = j.at("grid_x").get<int>();
        r.grid_y = j.at("grid_y").get<int>();
        r.magnification = img::parse_magnification(j.at("magnification").get<std::string>());
        r.tissue_fraction = j.at("tissue_fraction").get<double>();
        r.focus_score = j.at("focus_score").get<double>();
        r.dhash = parse_dhash_hex(j.at("dhash").get<std::string>());
        r.label = img::parse_grade(j.at("label").get<std::string>());
        return r;
    } catch (const std::exception& e) {
        throw IoError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
}

inline std::string manifest_text(const std::vector<img::PatchRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += manifest_row(r).dump();
        out += '\n';
    }
    return out;
}

inline std::vector<img::PatchRecord> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    std::vector<img::PatchRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        records.push_back(parse_manifest_row(line, line_no));
    }
    return records;
}

// Canonical patch image filename next to the manifest.
inline std::string patch_filename(const img::PatchRecord& r) {
    return r.source_id + "_" + std::to_string(r.grid_x) + "_" + std::to_string(r.grid_y) +
           ".png";
}

}  // namespace fedpath::io
