// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "tsvar/errors.hpp"
#include "tsvar/qcalc.hpp"

namespace tsvar {

/**
 * Gamma reversion measure pi(dr) = r^{alpha-1} exp(-r/beta) / (Gamma(alpha) beta^alpha) dr.
 *
 * alpha > 1 keeps the inverse moment of reversion speeds finite; beta is the
 * scale parameter in 1/hour.
 */
struct GammaReversionMeasure {
    double alpha;
    double beta;

    GammaReversionMeasure(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
        if (!(alpha > 1.0))
            throw DomainError("reversion measure requires shape alpha > 1");
        if (!(beta > 0.0))
            throw DomainError("reversion measure requires scale beta > 0");
    }
};

/// Inverse moment R = 1/(beta (alpha - 1)), in hours.
double inverse_moment(const GammaReversionMeasure& m);

/// Stationary autocorrelation (1 + beta tau)^{-(alpha-1)} at lag tau >= 0 hours.
double acf_theoretical(const GammaReversionMeasure& m, double tau);

/**
 * Inverse of the regularized lower incomplete gamma CDF: the r > 0 with
 * P(shape, r/scale) = p, to 1e-10 relative accuracy.
 *
 * Geometric bracketing plus log-space bisection to 1e-3 relative, then a
 * guarded Newton polish. Throws ConvergenceError when the root-finder fails
 * (pathological shapes below about 1e-8).
 */
double gamma_quantile(double shape, double scale, double p);

/**
 * N-point quantile discretization of a Gamma density: node i sits at the
 * (2i-1)/(2N) quantile, weights are uniformly 1/N.
 *
 * Nodes are cached per (shape, scale, N) key and shared; the cache is safe
 * under concurrent lookup and insert.
 */
class DiscreteMeasure {
  public:
    static DiscreteMeasure quantiles(double shape, double scale, std::size_t count);
    static DiscreteMeasure quantiles(const GammaReversionMeasure& m, std::size_t count);

    /// Wrap an explicit node set (e.g. an atomic test measure). Not cached.
    static DiscreteMeasure from_nodes(std::vector<double> nodes);

    std::span<const double> nodes() const noexcept { return *nodes_; }
    std::size_t count() const noexcept { return nodes_->size(); }
    double shape() const noexcept { return shape_; }
    double scale() const noexcept { return scale_; }
    bool has_source() const noexcept { return shape_ > 0.0; }

  private:
    DiscreteMeasure(double shape, double scale, std::shared_ptr<const std::vector<double>> nodes)
        : shape_(shape), scale_(scale), nodes_(std::move(nodes)) {}

    double shape_;  // 0 marks a measure built from explicit nodes
    double scale_;
    std::shared_ptr<const std::vector<double>> nodes_;
};

/**
 * Gamma density tilted by r^{-1/(1-q)}: shape drops to alpha - 1/(1-q) at the
 * same scale, and the constant
 *   prefactor = Gamma(alpha - 1/(1-q)) / Gamma(alpha) * beta^{-1/(1-q)}
 * carries the normalization so that
 *   int f(r) pi(dr) = prefactor * int r^{1/(1-q)} f(r) tilted(dr).
 *
 * Absorbs the r^{-1/(1-q)} blow-up of exp_q(lambda/r) at the origin, which
 * is what makes the upper-side quadrature usable.
 */
struct TiltedMeasure {
    double shape;
    double scale;
    double prefactor;
};

/// Requires 0 < q < 1 - 1/alpha (FeasibilityError otherwise).
TiltedMeasure tilt(const GammaReversionMeasure& m, ShapeParameter q);

enum class Scheme { plain, tilted };

/**
 * Quadrature of int exp_q(lambda / r) pi(dr) for lambda > 0, 0 < q < 1 - 1/alpha.
 *
 * Scheme::plain sums exp_q(lambda/r_i) over pi's own quantile nodes and
 * converges slowly because of the integrand singularity; Scheme::tilted sums
 * prefactor * r_i^{1/(1-q)} exp_q(lambda/r_i) over the tilted measure's nodes
 * with a bounded integrand. Both estimates are >= 1.
 */
double integrate_qexp_upper(const GammaReversionMeasure& m, ShapeParameter q, double lambda,
                            std::size_t count, Scheme scheme);

/**
 * Quadrature of int exp_q(-lambda / r) pi(dr) for lambda > 0, q >= 1, over
 * pi's quantile nodes. The integrand is bounded by 1, so no tilting is
 * needed; the value lies in (0, 1].
 */
double integrate_qexp_lower(const GammaReversionMeasure& m, ShapeParameter q, double lambda,
                            std::size_t count);

}  // namespace tsvar
