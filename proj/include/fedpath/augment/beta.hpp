// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "fedpath/core/error.hpp"
#include "fedpath/core/rng.hpp"

namespace fedpath::aug {

namespace detail {

// Marsaglia-Tsang gamma variate, shape >= 1.
inline double gamma_ge1(double shape, Rng& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x = rng.normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = 1.0 - rng.unit();  // (0, 1]
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Shape < 1 handled by boosting: Gamma(a) = Gamma(a+1) * U^(1/a).
inline double gamma_sample(double shape, Rng& rng) {
    if (shape >= 1.0) return gamma_ge1(shape, rng);
    double g = gamma_ge1(shape + 1.0, rng);
    double u = 1.0 - rng.unit();  // (0, 1]
    return g * std::pow(u, 1.0 / shape);
}

}  // namespace detail

// Beta(alpha, alpha) variate in [0,1] via two gamma draws.
inline double beta_sample(double alpha, Rng& rng) {
    if (!(alpha > 0.0)) throw NumericError("beta_sample: alpha must be > 0");
    double g1 = detail::gamma_sample(alpha, rng);
    double g2 = detail::gamma_sample(alpha, rng);
    double s = g1 + g2;
    if (s <= 0.0) return 0.5;  // both underflowed; symmetric fallback
    double b = g1 / s;
    if (b < 0.0) b = 0.0;
    if (b > 1.0) b = 1.0;
    return b;
}

}  // namespace fedpath::aug
