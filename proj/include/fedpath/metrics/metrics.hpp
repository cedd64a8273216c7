// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include <json.hpp>

#include "fedpath/core/error.hpp"
#include "fedpath/imaging/types.hpp"

namespace fedpath::metrics {

// Rows are the true grade, columns the predicted grade.
struct ConfusionMatrix {
    std::array<std::array<int64_t, 3>, 3> counts{};

    int64_t total() const {
        int64_t t = 0;
        for (const auto& row : counts) {
            for (int64_t c : row) t += c;
        }
        return t;
    }

    int64_t trace() const { return counts[0][0] + counts[1][1] + counts[2][2]; }
};

inline ConfusionMatrix confusion(const std::vector<int>& true_labels,
                                 const std::vector<int>& pred_labels) {
    if (true_labels.size() != pred_labels.size()) {
        throw DimensionError("confusion: label lists differ in length");
    }
    ConfusionMatrix cm;
    for (size_t i = 0; i < true_labels.size(); ++i) {
        int t = true_labels[i], p = pred_labels[i];
        if (t < 0 || t > 2 || p < 0 || p > 2) {
            throw ConfigError("confusion: label out of range at sample " + std::to_string(i));
        }
        cm.counts[static_cast<size_t>(t)][static_cast<size_t>(p)]++;
    }
    return cm;
}

struct GradeMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Zero-denominator convention: the metric is reported as 0.0 with the
    // corresponding flag set.
    bool precision_undefined = false;
    bool recall_undefined = false;
};

struct MetricsReport {
    double accuracy = 0.0;
    std::array<GradeMetrics, 3> per_grade{};
    double macro_f1 = 0.0;
    double weighted_f1 = 0.0;
    std::map<img::Magnification, double> per_magnification_accuracy;
    ConfusionMatrix confusion;
};

// Per-grade precision/recall/F1 plus macro/weighted aggregates. All math
// in f64. Throws on an empty matrix.
inline MetricsReport grade_metrics(const ConfusionMatrix& cm) {
    const int64_t total = cm.total();
    if (total == 0) throw ConfigError("grade_metrics: empty confusion matrix");
    MetricsReport r;
    r.confusion = cm;
    r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);

    double macro_acc = 0.0;
    double weighted_acc = 0.0;
    for (int g = 0; g < 3; ++g) {
        const auto gu = static_cast<size_t>(g);
        int64_t tp = cm.counts[gu][gu];
        int64_t fp = 0, fn = 0;
        for (int o = 0; o < 3; ++o) {
            if (o == g) continue;
            fp += cm.counts[static_cast<size_t>(o)][gu];
            fn += cm.counts[gu][static_cast<size_t>(o)];
        }
        GradeMetrics& m = r.per_grade[gu];
        if (tp + fp == 0) {
            m.precision = 0.0;
            m.precision_undefined = true;
        } else {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (tp + fn == 0) {
            m.recall = 0.0;
            m.recall_undefined = true;
        } else {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        }
        m.f1 = (m.precision + m.recall > 0.0)
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        macro_acc += m.f1;
        int64_t support = tp + fn;
        weighted_acc += static_cast<double>(support) / static_cast<double>(total) * m.f1;
    }
    r.macro_f1 = macro_acc / 3.0;
    r.weighted_f1 = weighted_acc;
    return r;
}

// Per-level accuracy; levels absent from the sample set are omitted.
inline std::map<img::Magnification, double> magnification_accuracy(
    const std::vector<img::Magnification>& mags, const std::vector<int>& true_labels,
    const std::vector<int>& pred_labels) {
    if (mags.size() != true_labels.size() || mags.size() != pred_labels.size()) {
        throw DimensionError("magnification_accuracy: list lengths differ");
    }
    std::map<img::Magnification, std::pair<int64_t, int64_t>> tally;  // correct, total
    for (size_t i = 0; i < mags.size(); ++i) {
        auto& t = tally[mags[i]];
        t.second++;
        if (true_labels[i] == pred_labels[i]) t.first++;
    }
    std::map<img::Magnification, double> out;
    for (const auto& [mag, t] : tally) {
        out[mag] = static_cast<double>(t.first) / static_cast<double>(t.second);
    }
    return out;
}

inline nlohmann::json report_to_json(const MetricsReport& r) {
    nlohmann::json j;
    j["accuracy"] = r.accuracy;
    nlohmann::json grades = nlohmann::json::array();
    for (int g = 0; g < 3; ++g) {
        const auto& m = r.per_grade[static_cast<size_t>(g)];
        grades.push_back({{"grade", img::to_string(img::grade_from_index(g))},
                          {"precision", m.precision},
                          {"recall", m.recall},
                          {"f1", m.f1},
                          {"precision_undefined", m.precision_undefined},
                          {"recall_undefined", m.recall_undefined}});
    }
    j["per_grade"] = grades;
    j["macro_f1"] = r.macro_f1;
    j["weighted_f1"] = r.weighted_f1;
    nlohmann::json mag = nlohmann::json::object();
    for (const auto& [m, acc] : r.per_magnification_accuracy) {
        mag[img::to_string(m)] = acc;
    }
    j["per_magnification_accuracy"] = mag;
    j["confusion"] = {{r.confusion.counts[0][0], r.confusion.counts[0][1], r.confusion.counts[0][2]},
                      {r.confusion.counts[1][0], r.confusion.counts[1][1], r.confusion.counts[1][2]},
                      {r.confusion.counts[2][0], r.confusion.counts[2][1], r.confusion.counts[2][2]}};
    return j;
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
    MetricsReport r;
    r.accuracy = j.at("accuracy").get<double>();
    for (int g = 0; g < 3; ++g) {
        const auto& e = j.at("per_grade").at(static_cast<size_t>(g));
        auto& m = r.per_grade[static_cast<size_t>(g)];
        m.precision = e.at("precision").get<double>();
        m.recall = e.at("recall").get<double>();
        m.f1 = e.at("f1").get<double>();
        m.precision_undefined = e.at("precision_undefined").get<bool>();
        m.recall_undefined = e.at("recall_undefined").get<bool>();
    }
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.weighted_f1 = j.at("weighted_f1").get<double>();
    for (const auto& [key, val] : j.at("per_magnification_accuracy").items()) {
        r.per_magnification_accuracy[img::parse_magnification(key)] = val.get<double>();
    }
    for (size_t t = 0; t < 3; ++t) {
        for (size_t p = 0; p < 3; ++p) {
            r.confusion.counts[t][p] = j.at("confusion").at(t).at(p).get<int64_t>();
        }
    }
    return r;
}

}  // namespace fedpath::metrics
