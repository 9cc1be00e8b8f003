// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

namespace tsvar::special {

/**
 * Natural log of the Gamma function for x > 0.
 *
 * Lanczos approximation (g = 7, 9 terms), accurate to about 1e-15 relative
 * over the shapes used here; arguments below 0.5 go through the recurrence
 * log Gamma(x) = log Gamma(x + 1) - log x to stay on the stable branch.
 * Implemented in-library so results are bit-reproducible across libm builds.
 */
double log_gamma(double x);

/**
 * Regularized lower incomplete gamma function P(a, x) for a > 0, x >= 0.
 *
 * Power series for x < a + 1, Lentz continued fraction for the upper tail
 * otherwise; both iterated to double-precision roundoff.
 */
double reg_lower_gamma(double a, double x);

}  // namespace tsvar::special
