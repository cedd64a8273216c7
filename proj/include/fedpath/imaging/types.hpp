// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "fedpath/core/error.hpp"

namespace fedpath::img {

// The four acquisition scales of the grading task.
enum class Magnification : uint8_t { x4 = 0, x10 = 1, x20 = 2, x40 = 3 };

// Tumor differentiation grades; index order doubles as the class label.
enum class Grade : uint8_t { I = 0, II = 1, III = 2 };

constexpr int kNumGrades = 3;
constexpr int kNumMagnifications = 4;

inline const char* to_string(Magnification m) {
    switch (m) {
        case Magnification::x4: return "4x";
        case Magnification::x10: return "10x";
        case Magnification::x20: return "20x";
        case Magnification::x40: return "40x";
    }
    return "?";
}

inline Magnification parse_magnification(const std::string& s) {
    if (s == "4x") return Magnification::x4;
    if (s == "10x") return Magnification::x10;
    if (s == "20x") return Magnification::x20;
    if (s == "40x") return Magnification::x40;
    throw ConfigError("unknown magnification: " + s);
}

inline const char* to_string(Grade g) {
    switch (g) {
        case Grade::I: return "GradeI";
        case Grade::II: return "GradeII";
        case Grade::III: return "GradeIII";
    }
    return "?";
}

inline Grade parse_grade(const std::string& s) {
    if (s == "GradeI") return Grade::I;
    if (s == "GradeII") return Grade::II;
    if (s == "GradeIII") return Grade::III;
    throw ConfigError("unknown grade label: " + s);
}

inline int label_index(Grade g) { return static_cast<int>(g); }

inline Grade grade_from_index(int i) {
    if (i < 0 || i >= kNumGrades) throw ConfigError("grade index out of range");
    return static_cast<Grade>(i);
}

}  // namespace fedpath::img
