// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace tsvar {

struct SimplexResult {
    std::vector<double> x;
    double value;
    std::size_t evaluations;
};

struct SimplexOptions {
    double step = 0.25;        ///< initial per-coordinate simplex offset
    double tolerance = 1e-10;  ///< relative simplex diameter at convergence
    std::size_t max_iterations = 40000;
};

/**
 * Derivative-free Nelder-Mead simplex minimization with the standard
 * reflection/expansion/contraction/shrink coefficients (1, 2, 1/2, 1/2).
 *
 * Fully deterministic: the simplex is seeded from x0 plus fixed axis steps
 * and every update is a pure function of the current simplex, so repeated
 * runs are bit-identical.
 */
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& options = {});

/**
 * nelder_mead restarted from each converged point with fresh simplexes of
 * alternating step sizes until the objective stops improving (at most
 * `max_restarts` extra runs). Escapes the degenerate valleys a single
 * simplex collapse can leave behind.
 */
SimplexResult nelder_mead_restarted(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const SimplexOptions& options = {},
                                    std::size_t max_restarts = 8);

}  // namespace tsvar
