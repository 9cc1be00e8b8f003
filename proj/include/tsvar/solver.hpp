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

namespace tsvar {

enum class Side { upper, lower };

/// Admissible shape-parameter range for one side; upper bound may be infinite.
struct QInterval {
    double lo;
    double hi;
};

/**
 * Feasible q range: (0, 1 - 1/alpha) for the upper bound problem (the
 * q-exponential integral diverges beyond), [1, inf) for the lower one.
 */
QInterval feasible_q_interval(Side side, const GammaReversionMeasure& m);

/**
 * One TsVaR optimization instance.
 *
 * Feasibility of (side, q) is checked here, eagerly, so infeasible
 * combinations never reach the integrals. The quadrature scheme applies to
 * the upper side only; the lower-side integrand is bounded and always uses
 * the measure's own quantile nodes.
 */
struct TsVaRProblem {
    GammaReversionMeasure measure;
    Side side;
    ShapeParameter q;
    double a;            ///< accuracy parameter in (0, 1]
    std::size_t count;   ///< quadrature resolution N
    Scheme scheme;

    TsVaRProblem(GammaReversionMeasure measure_, Side side_, ShapeParameter q_, double a_,
                 std::size_t count_, Scheme scheme_ = Scheme::tilted);
};

struct TsVaRSolution {
    double value;        ///< optimized bound, hours (same units as R)
    double lambda_star;  ///< optimizer of the lambda-parameterized objective
    std::size_t iterations;
    bool converged;
    double normalized;   ///< value / R
};

/**
 * Upper objective g(lambda) = lambda ln_q((1/a) int exp_q(1/(lambda r)) pi(dr)),
 * whose infimum over lambda > 0 is the worst-case overestimate of R.
 * Strictly convex in lambda.
 */
double upper_objective(const TsVaRProblem& p, double lambda);

/**
 * Lower objective g(lambda) = -lambda ln_q((1/a) int exp_q(-1/(lambda r)) pi(dr)),
 * whose supremum over lambda > 0 is the worst-case underestimate of R.
 * Strictly concave in lambda.
 */
double lower_objective(const TsVaRProblem& p, double lambda);

/**
 * The two fixed-sign pieces of the objective derivative.
 *
 * Both are strictly positive for lambda > 0. The upper objective has
 * d g / d lambda = decay - growth; the lower one has the mirrored
 * d g / d lambda = growth - decay. The gradient flow moves lambda by
 * (growth - decay) on either side, and the semi-implicit step treats decay
 * implicitly, which keeps every iterate positive for any step size.
 */
struct GradientTerms {
    double decay;
    double growth;
};

GradientTerms gradient_terms_upper(const TsVaRProblem& p, double lambda);
GradientTerms gradient_terms_lower(const TsVaRProblem& p, double lambda);

struct DescendOptions {
    double lambda0 = 500.0;
    double step_size = 1e4;            ///< pseudo-time step delta-u
    double tolerance = 1e-12;          ///< stop when |lambda_{n+1} - lambda_n| drops below
    std::size_t max_iterations = 1000000;
    std::size_t stall_window = 10000;  ///< steps without a new smallest |delta| before giving up
};

/**
 * Semi-implicit gradient descent
 *   lambda' = (growth * du + lambda) / (1 + decay * du / lambda)
 * iterated until the successive difference falls below the tolerance.
 *
 * The equilibrium is unique by strict convexity/concavity. When the
 * accuracy parameter sits below its feasible floor the iteration has no
 * interior equilibrium and drifts toward lambda = 0; that case is detected
 * through the unbalanced gradient terms at the stopping point and raised as
 * a DomainError. Hitting the iteration cap or stalling raises
 * ConvergenceError.
 */
TsVaRSolution descend(const TsVaRProblem& p, const DescendOptions& options = {});

/// One point of an accuracy sweep; `note` is empty on success.
struct SweepPoint {
    double a;
    std::optional<TsVaRSolution> solution;
    std::string note;
};

/**
 * Run one descent per accuracy value, in parallel, assembling results in
 * grid order. Infeasible or non-convergent points come back flagged rather
 * than failing the sweep.
 */
std::vector<SweepPoint> accuracy_sweep(const TsVaRProblem& problem_template,
                                       std::span<const double> a_grid,
                                       const DescendOptions& options = {});

namespace detail {

/**
 * Precomputed quadrature state for one TsVaR problem: nodes, tilted weights,
 * and scratch buffers. Owns mutable scratch, so each instance serves one
 * thread at a time.
 */
class TsVaRObjective {
  public:
    static TsVaRObjective for_problem(const TsVaRProblem& p);

    /// Plain-scheme evaluator over explicit nodes (uniform weights).
    TsVaRObjective(Side side, ShapeParameter q, double a, DiscreteMeasure nodes);

    double objective(double lambda) const;
    GradientTerms terms(double lambda) const;

  private:
    TsVaRObjective(Side side, ShapeParameter q, double a, DiscreteMeasure nodes, bool tilted,
                   double prefactor);

    /// value integral J (or K) and the (1/r) exp_q^q companion, at mu = 1/lambda
    struct Sums {
        double value;
        double inv_weighted;
    };
    Sums sums(double mu) const;

    Side side_;
    double q_;
    double a_;
    DiscreteMeasure nodes_;
    bool tilted_;
    double prefactor_;
    std::vector<double> wpow_;  // r_i^{1/(1-q)} for the tilted scheme
    mutable std::vector<double> buf_value_;
    mutable std::vector<double> buf_inv_;
};

}  // namespace detail

}  // namespace tsvar
