// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fedpath/core/error.hpp"
#include "fedpath/imaging/image.hpp"
#include "fedpath/imaging/od.hpp"

namespace fedpath::img {

using Vec3 = std::array<double, 3>;

// Two unit stain directions in OD space (row 0 hematoxylin-like, row 1
// eosin-like) plus the 99th-percentile concentration per stain.
struct StainProfile {
    std::array<Vec3, 2> stain_matrix;
    std::array<double, 2> max_conc;
};

// Per-channel mean/std in the Ruderman l-alpha-beta space.
struct LabStats {
    Vec3 mean;
    Vec3 std;
};

namespace detail {

inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

inline Vec3 normalize3(const Vec3& a) {
    double n = norm3(a);
    if (n < 1e-12) throw EstimationError("cannot normalize near-zero vector");
    return {a[0] / n, a[1] / n, a[2] / n};
}

using Mat3 = std::array<Vec3, 3>;

inline Vec3 matvec3(const Mat3& m, const Vec3& v) {
    return {dot3(m[0], v), dot3(m[1], v), dot3(m[2], v)};
}

// Dominant eigenvector of a symmetric 3x3 matrix by power iteration.
// Fixed start vectors keep the result deterministic.
inline bool power_iteration(const Mat3& a, Vec3& vec, double& value,
                            int max_iter = 200, double tol = 1e-9) {
    static const Vec3 starts[3] = {{0.577350269, 0.577350269, 0.577350269},
                                   {1.0, 0.0, 0.0},
                                   {0.0, 1.0, 0.0}};
    for (const Vec3& start : starts) {
        Vec3 v = start;
        double lambda = 0.0;
        bool converged = false;
        for (int it = 0; it < max_iter; ++it) {
            Vec3 w = matvec3(a, v);
            double n = norm3(w);
            if (n < 1e-15) break;
            Vec3 v_next = {w[0] / n, w[1] / n, w[2] / n};
            // Sign-insensitive convergence check.
            double d = std::min(
                std::abs(v_next[0] - v[0]) + std::abs(v_next[1] - v[1]) + std::abs(v_next[2] - v[2]),
                std::abs(v_next[0] + v[0]) + std::abs(v_next[1] + v[1]) + std::abs(v_next[2] + v[2]));
            v = v_next;
            lambda = dot3(v, matvec3(a, v));
            if (d < tol) {
                converged = true;
                break;
            }
        }
        if (converged) {
            vec = v;
            value = lambda;
            return true;
        }
    }
    return false;
}

inline double percentile(std::vector<double> v, double pct) {
    if (v.empty()) throw EstimationError("percentile of empty set");
    std::sort(v.begin(), v.end());
    double idx = pct / 100.0 * static_cast<double>(v.size() - 1);
    size_t lo = static_cast<size_t>(std::floor(idx));
    size_t hi = static_cast<size_t>(std::ceil(idx));
    double frac = idx - static_cast<double>(lo);
    return v[lo] + (v[hi] - v[lo]) * frac;
}

// Least-squares unmixing of one OD pixel against a 2x3 stain matrix:
// c = (M M^T)^-1 M od.
struct Unmixer {
    std::array<Vec3, 2> m;
    double g00, g01, g11, inv_det;

    explicit Unmixer(const std::array<Vec3, 2>& stains) : m(stains) {
        g00 = dot3(m[0], m[0]);
        g01 = dot3(m[0], m[1]);
        g11 = dot3(m[1], m[1]);
        double det = g00 * g11 - g01 * g01;
        if (std::abs(det) < 1e-9) {
            throw EstimationError("stain matrix is singular, cannot unmix");
        }
        inv_det = 1.0 / det;
    }

    std::array<double, 2> unmix(const Vec3& od) const {
        double r0 = dot3(m[0], od);
        double r1 = dot3(m[1], od);
        return {(g11 * r0 - g01 * r1) * inv_det, (g00 * r1 - g01 * r0) * inv_det};
    }
};

}  // namespace detail

// Estimates the two dominant stain directions and their reference
// concentrations from OD pixels (flattened triples). Pixels with any
// channel at or below `beta` are treated as background and dropped before
// the eigen analysis; the angle extremes are taken at the alpha_pct /
// (100 - alpha_pct) percentiles.
inline StainProfile estimate_stain_profile_macenko(const std::vector<double>& od_pixels,
                                                   double beta = 0.15,
                                                   double alpha_pct = 1.0) {
    if (od_pixels.size() % 3 != 0) throw DimensionError("od pixel buffer not triples");
    const size_t n = od_pixels.size() / 3;
    std::vector<Vec3> tissue;
    tissue.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Vec3 p = {od_pixels[i * 3], od_pixels[i * 3 + 1], od_pixels[i * 3 + 2]};
        if (p[0] > beta && p[1] > beta && p[2] > beta) tissue.push_back(p);
    }
    if (tissue.size() < 100) {
        throw EstimationError("too few tissue pixels above OD threshold (" +
                              std::to_string(tissue.size()) + ")");
    }

    // Covariance of the tissue OD pixels.
    Vec3 mean = {0, 0, 0};
    for (const auto& p : tissue) {
        for (int c = 0; c < 3; ++c) mean[c] += p[c];
    }
    for (int c = 0; c < 3; ++c) mean[c] /= static_cast<double>(tissue.size());
    detail::Mat3 cov = {Vec3{0, 0, 0}, Vec3{0, 0, 0}, Vec3{0, 0, 0}};
    for (const auto& p : tissue) {
        Vec3 d = {p[0] - mean[0], p[1] - mean[1], p[2] - mean[2]};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) cov[i][j] += d[i] * d[j];
        }
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) cov[i][j] /= static_cast<double>(tissue.size() - 1);
    }

    // Two principal eigenvectors via power iteration plus deflation.
    Vec3 v1, v2;
    double l1, l2;
    if (!detail::power_iteration(cov, v1, l1)) {
        throw EstimationError("eigen analysis did not converge");
    }
    detail::Mat3 deflated = cov;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) deflated[i][j] -= l1 * v1[i] * v1[j];
    }
    if (!detail::power_iteration(deflated, v2, l2)) {
        throw EstimationError("eigen analysis did not converge (second vector)");
    }
    if (!(l2 > 1e-8 * std::max(l1, 1e-30)) || l1 <= 0.0) {
        throw EstimationError("stain plane is rank deficient");
    }
    if (v1[0] < 0) v1 = {-v1[0], -v1[1], -v1[2]};
    if (v2[0] < 0) v2 = {-v2[0], -v2[1], -v2[2]};

    // Angle extremes of the tissue pixels projected onto the eigen plane.
    std::vector<double> phi(tissue.size());
    for (size_t i = 0; i < tissue.size(); ++i) {
        double t1 = detail::dot3(tissue[i], v1);
        double t2 = detail::dot3(tissue[i], v2);
        phi[i] = std::atan2(t2, t1);
    }
    double phi_min = detail::percentile(phi, alpha_pct);
    double phi_max = detail::percentile(phi, 100.0 - alpha_pct);

    auto dir_at = [&](double a) {
        Vec3 u = {std::cos(a) * v1[0] + std::sin(a) * v2[0],
                  std::cos(a) * v1[1] + std::sin(a) * v2[1],
                  std::cos(a) * v1[2] + std::sin(a) * v2[2]};
        if (u[0] + u[1] + u[2] < 0) u = {-u[0], -u[1], -u[2]};
        return detail::normalize3(u);
    };
    Vec3 u_min = dir_at(phi_min);
    Vec3 u_max = dir_at(phi_max);

    StainProfile prof;
    // Hematoxylin absorbs red strongly: larger first-channel weight first.
    if (u_min[0] >= u_max[0]) {
        prof.stain_matrix = {u_min, u_max};
    } else {
        prof.stain_matrix = {u_max, u_min};
    }

    // 99th-percentile concentrations over all provided pixels.
    detail::Unmixer unmixer(prof.stain_matrix);
    std::vector<double> c0(n), c1(n);
    for (size_t i = 0; i < n; ++i) {
        Vec3 p = {od_pixels[i * 3], od_pixels[i * 3 + 1], od_pixels[i * 3 + 2]};
        auto c = unmixer.unmix(p);
        c0[i] = c[0];
        c1[i] = c[1];
    }
    prof.max_conc = {detail::percentile(c0, 99.0), detail::percentile(c1, 99.0)};
    if (prof.max_conc[0] <= 0.0 || prof.max_conc[1] <= 0.0) {
        throw EstimationError("non-positive reference concentration");
    }
    return prof;
}

inline StainProfile estimate_stain_profile_macenko(const ImageU8& img, double beta = 0.15,
                                                   double alpha_pct = 1.0) {
    return estimate_stain_profile_macenko(rgb_to_od(img), beta, alpha_pct);
}

// Classic reference H&E profile, used when no reference image is supplied
// or profile estimation fails on the designated reference.
inline StainProfile reference_stain_profile() {
    StainProfile p;
    p.stain_matrix = {detail::normalize3({0.5626, 0.7201, 0.4062}),
                      detail::normalize3({0.2159, 0.8012, 0.5581})};
    p.max_conc = {1.9705, 1.0308};
    return p;
}

// Unmix against the source profile, rescale concentrations to the target's
// reference levels, recompose with the target stain directions.
inline ImageU8 macenko_normalize(const ImageU8& img, const StainProfile& source,
                                 const StainProfile& target, double i0 = 255.0) {
    detail::Unmixer unmixer(source.stain_matrix);
    const double s0 = target.max_conc[0] / source.max_conc[0];
    const double s1 = target.max_conc[1] / source.max_conc[1];
    const auto& t0 = target.stain_matrix[0];
    const auto& t1 = target.stain_matrix[1];
    ImageU8 out(img.width, img.height);
    for (size_t i = 0; i < img.n_pixels(); ++i) {
        const uint8_t* p = img.data.data() + i * 3;
        Vec3 od = {od_from_u8(p[0], i0), od_from_u8(p[1], i0), od_from_u8(p[2], i0)};
        auto c = unmixer.unmix(od);
        const double c0 = c[0] * s0;
        const double c1 = c[1] * s1;
        uint8_t* q = out.data.data() + i * 3;
        for (int ch = 0; ch < 3; ++ch) {
            double od_new = c0 * t0[ch] + c1 * t1[ch];
            if (od_new < 0.0) od_new = 0.0;
            q[ch] = od_to_u8(od_new, i0);
        }
    }
    return out;
}

// ---- Reinhard (l-alpha-beta statistics matching) ---------------------------

namespace detail {

// Ruderman RGB<->LMS matrices as used by the statistics-matching method.
inline Vec3 rgb01_to_lab(double r, double g, double b) {
    double L = 0.3811 * r + 0.5783 * g + 0.0402 * b;
    double M = 0.1967 * r + 0.7244 * g + 0.0782 * b;
    double S = 0.0241 * r + 0.1288 * g + 0.8444 * b;
    constexpr double kMinLms = 1e-6;
    L = std::log10(std::max(L, kMinLms));
    M = std::log10(std::max(M, kMinLms));
    S = std::log10(std::max(S, kMinLms));
    constexpr double inv_sqrt3 = 0.5773502691896258;
    constexpr double inv_sqrt6 = 0.4082482904638630;
    constexpr double inv_sqrt2 = 0.7071067811865476;
    return {inv_sqrt3 * (L + M + S), inv_sqrt6 * (L + M - 2.0 * S), inv_sqrt2 * (L - M)};
}

inline Vec3 lab_to_rgb01(const Vec3& lab) {
    constexpr double inv_sqrt3 = 0.5773502691896258;
    constexpr double inv_sqrt6 = 0.4082482904638630;
    constexpr double inv_sqrt2 = 0.7071067811865476;
    double Lh = inv_sqrt3 * lab[0] + inv_sqrt6 * lab[1] + inv_sqrt2 * lab[2];
    double Mh = inv_sqrt3 * lab[0] + inv_sqrt6 * lab[1] - inv_sqrt2 * lab[2];
    double Sh = inv_sqrt3 * lab[0] - 2.0 * inv_sqrt6 * lab[1];
    double L = std::pow(10.0, Lh);
    double M = std::pow(10.0, Mh);
    double S = std::pow(10.0, Sh);
    return {4.4679 * L - 3.5873 * M + 0.1193 * S,
            -1.2186 * L + 2.3809 * M - 0.1624 * S,
            0.0497 * L - 0.2439 * M + 1.2045 * S};
}

}  // namespace detail

inline LabStats lab_stats(const ImageU8& img) {
    Vec3 sum = {0, 0, 0}, sq = {0, 0, 0};
    const size_t n = img.n_pixels();
    for (size_t i = 0; i < n; ++i) {
        const uint8_t* p = img.data.data() + i * 3;
        Vec3 lab = detail::rgb01_to_lab(p[0] / 255.0, p[1] / 255.0, p[2] / 255.0);
        for (int c = 0; c < 3; ++c) {
            sum[c] += lab[c];
            sq[c] += lab[c] * lab[c];
        }
    }
    LabStats st;
    for (int c = 0; c < 3; ++c) {
        st.mean[c] = sum[c] / static_cast<double>(n);
        double var = sq[c] / static_cast<double>(n) - st.mean[c] * st.mean[c];
        st.std[c] = std::sqrt(std::max(var, 0.0));
    }
    return st;
}

// Pre-quantization output: RGB in [0,1] floats (unclamped), row-major
// triples. Exposed so the statistics contract can be verified exactly.
inline std::vector<double> reinhard_normalize_float(const ImageU8& img,
                                                    const LabStats& target) {
    LabStats src = lab_stats(img);
    constexpr double kMinStd = 1e-12;
    bool any = false;
    for (int c = 0; c < 3; ++c) any = any || src.std[c] > kMinStd;
    if (!any) throw EstimationError("reinhard: constant image has no channel variance");

    std::vector<double> out(img.n_pixels() * 3);
    for (size_t i = 0; i < img.n_pixels(); ++i) {
        const uint8_t* p = img.data.data() + i * 3;
        Vec3 lab = detail::rgb01_to_lab(p[0] / 255.0, p[1] / 255.0, p[2] / 255.0);
        Vec3 mapped;
        for (int c = 0; c < 3; ++c) {
            if (src.std[c] > kMinStd) {
                mapped[c] = (lab[c] - src.mean[c]) * (target.std[c] / src.std[c]) + target.mean[c];
            } else {
                // Degenerate channel (e.g. gray input): pin to the target mean.
                mapped[c] = target.mean[c];
            }
        }
        Vec3 rgb = detail::lab_to_rgb01(mapped);
        for (int c = 0; c < 3; ++c) out[i * 3 + c] = rgb[c];
    }
    return out;
}

inline ImageU8 reinhard_normalize(const ImageU8& img, const LabStats& target) {
    std::vector<double> rgb = reinhard_normalize_float(img, target);
    ImageU8 out(img.width, img.height);
    for (size_t i = 0; i < rgb.size(); ++i) {
        out.data[i] = clamp_u8(static_cast<float>(rgb[i] * 255.0));
    }
    return out;
}

}  // namespace fedpath::img
