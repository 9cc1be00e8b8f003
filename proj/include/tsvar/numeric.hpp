// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace tsvar {

/**
 * Pairwise (tree) summation in a fixed order.
 *
 * The splitting pattern depends only on the length, so the result is
 * bit-identical for a given input regardless of thread count or call site.
 */
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

/// Distance to the next representable double above |x|.
inline double ulp_of(double x) {
    const double ax = std::fabs(x);
    return std::nextafter(ax, std::numeric_limits<double>::infinity()) - ax;
}

}  // namespace tsvar
