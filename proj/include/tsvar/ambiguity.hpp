// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsvar/qcalc.hpp"
#include "tsvar/reversion.hpp"
#include "tsvar/solver.hpp"

namespace tsvar {

/**
 * One ambiguity scenario: the worst-case Radon-Nikodym derivative at
 * aversion level lambda0, the accuracy parameter it implies, and the TsVaR
 * attained there.
 *
 * Emitted scenarios always satisfy mean(phi_star) = 1 within 1e-10,
 * a_star = exp_q(-H_q(phi_star)) by construction, and the side's bound
 * against R up to quadrature error of the scenario's discrete measure.
 */
struct AmbiguityScenario {
    double lambda0;
    DiscreteDensity phi_star;
    double a_star;
    double lambda_star;
    double tsvar;
    double normalized;
    Side side;
};

/**
 * Unique optimizer of the discretized inner problem at multiplier lambda0:
 * the density minimizing lambda0 (1/N) sum phi_i^q / r_i + H_q(phi) over
 * mean-one positive phi for the lower side, or maximizing the bracket with
 * -H_q(phi) for the upper side.
 *
 * Solved from the pointwise stationarity condition plus a monotone
 * bisection on the normalization multiplier (bracket expansion by 4,
 * residual tolerance 1e-12). The optimum has the deformed-Esscher form
 * c * exp_q(-lambda0/r) (lower) or c * exp_q(lambda0/r) (upper), and its
 * bracket value reproduces the quadrature of -+ln_q(int exp_q(-+lambda0/r) pi).
 */
DiscreteDensity worst_case_phi(Side side, double lambda0, ShapeParameter q,
                               const DiscreteMeasure& d);

/// Accuracy parameter implied by a density: a = exp_q(-H_q(phi)), in (0, 1].
double accuracy_from_phi(const DiscreteDensity& phi, ShapeParameter q);

/**
 * Relative gap between the two routes to the nonlinear expectation:
 * -+ln_q of the quadrature of exp_q(-+lambda/r) versus the inner optimum
 * from worst_case_phi on the same nodes. At most ~1e-8 on healthy inputs.
 */
double duality_gap(Side side, double lambda, ShapeParameter q, const DiscreteMeasure& d);

/**
 * Full scenario workflow: worst-case density at lambda0, implied accuracy
 * a_star, gradient descent at a = a_star, and the attained TsVaR.
 *
 * The descent runs on the scenario's own nodes (plain scheme), so the
 * duality attainment a_star^{q-1} * distorted_inverse_moment = tsvar holds
 * on the discrete measure; it is verified to 0.1% before the scenario is
 * emitted. d must be the quantile discretization of m.
 */
AmbiguityScenario scenario(Side side, double lambda0, ShapeParameter q,
                           const DiscreteMeasure& d, const GammaReversionMeasure& m,
                           const DescendOptions& options = {});

struct ScenarioPoint {
    double lambda0;
    std::optional<AmbiguityScenario> scenario;
    std::string note;
};

/**
 * Scenarios along a lambda0 grid, in order, truncated after the first
 * infeasible point (which is kept as a flagged row).
 */
std::vector<ScenarioPoint> scenario_sweep(Side side, std::span<const double> lambda0_grid,
                                          ShapeParameter q, const DiscreteMeasure& d,
                                          const GammaReversionMeasure& m);

}  // namespace tsvar
