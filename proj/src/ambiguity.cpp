// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#include "tsvar/ambiguity.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "tsvar/numeric.hpp"
#include "tsvar/supou.hpp"

namespace tsvar {

namespace {

// Stationarity of the inner Lagrangian gives phi_i as an explicit function
// of the multiplier eta; only the normalization depends on eta.
std::vector<double> stationary_phi(Side side, double lambda0, double q,
                                   std::span<const double> r, double eta) {
    std::vector<double> phi(r.size());
    if (q == 1.0) {
        // lower side at q = 1: ln phi + lambda0/r + 1 = eta
        for (std::size_t i = 0; i < r.size(); ++i)
            phi[i] = std::exp(eta - 1.0 - lambda0 / r[i]);
        return phi;
    }
    if (side == Side::lower) {
        const double e = 1.0 / (q - 1.0);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double denom = q * (1.0 + (q - 1.0) * lambda0 / r[i]);
            phi[i] = std::pow(eta * (q - 1.0) / denom, e);
        }
    } else {
        const double e = 1.0 / (1.0 - q);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double num = q * (1.0 + (1.0 - q) * lambda0 / r[i]);
            phi[i] = std::pow(num / (eta * (1.0 - q)), e);
        }
    }
    return phi;
}

double bracket_value(Side side, double lambda0, ShapeParameter q, std::span<const double> r,
                     const DiscreteDensity& phi) {
    std::vector<double> terms(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        terms[i] = std::pow(phi[i], q.value()) / r[i];
    const double moment = pairwise_mean(terms);
    const double h = tsallis_divergence(phi, q);
    return side == Side::lower ? lambda0 * moment + h : lambda0 * moment - h;
}

}  // namespace

DiscreteDensity worst_case_phi(Side side, double lambda0, ShapeParameter q,
                               const DiscreteMeasure& d) {
    if (!(lambda0 > 0.0))
        throw DomainError("worst_case_phi requires lambda0 > 0");
    if (side == Side::lower) {
        if (!(q.value() >= 1.0))
            throw FeasibilityError("lower-side inner problem requires q >= 1");
    } else {
        if (!(q.value() < 1.0))
            throw FeasibilityError("upper-side inner problem requires q < 1");
        if (q.is_classical() || !(q.value() > 0.0))
            throw FeasibilityError("upper-side inner problem requires 0 < q < 1");
    }

    const auto r = d.nodes();
    auto residual = [&](double eta) {
        return pairwise_mean(stationary_phi(side, lambda0, q.value(), r, eta)) - 1.0;
    };

    // The normalization residual is monotone in eta; expand a bracket by
    // factors of 4, then bisect.
    const bool increasing = (side == Side::lower);
    double lo = 1.0, hi = 1.0;
    double flo = residual(lo), fhi = flo;
    int guard = 0;
    while (flo > 0.0) {
        lo = increasing ? lo * 0.25 : lo * 4.0;
        flo = residual(lo);
        if (++guard > 600)
            throw ConvergenceError("worst_case_phi: multiplier bracket expansion failed");
    }
    guard = 0;
    while (fhi < 0.0) {
        hi = increasing ? hi * 4.0 : hi * 0.25;
        fhi = residual(hi);
        if (++guard > 600)
            throw ConvergenceError("worst_case_phi: multiplier bracket expansion failed");
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        mid = 0.5 * (lo + hi);
        const double f = residual(mid);
        if (std::fabs(f) <= 1e-12) break;
        if (f < 0.0)
            lo = mid;
        else
            hi = mid;
        if (std::fabs(hi - lo) <= 1e-15 * std::max(std::fabs(lo), std::fabs(hi))) break;
    }

    // The stationary family is closed under scaling, so snap the mean to 1
    // exactly instead of leaving the bisection residue in the density.
    std::vector<double> phi = stationary_phi(side, lambda0, q.value(), r, mid);
    const double mean = pairwise_mean(phi);
    if (!(mean > 0.0) || !std::isfinite(mean))
        throw ConvergenceError("worst_case_phi: degenerate normalization");
    for (double& v : phi) v /= mean;
    return DiscreteDensity(std::move(phi));
}

double accuracy_from_phi(const DiscreteDensity& phi, ShapeParameter q) {
    return q_exp(-tsallis_divergence(phi, q), q);
}

double duality_gap(Side side, double lambda, ShapeParameter q, const DiscreteMeasure& d) {
    const auto r = d.nodes();
    std::vector<double> terms(r.size());
    const double sign = side == Side::lower ? -1.0 : 1.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        terms[i] = q_exp(sign * lambda / r[i], q);
    const double lhs = sign * q_log(pairwise_mean(terms), q);
    const DiscreteDensity phi = worst_case_phi(side, lambda, q, d);
    const double rhs = bracket_value(side, lambda, q, r, phi);
    return std::fabs(lhs - rhs) / std::max(std::fabs(lhs), 1e-300);
}

AmbiguityScenario scenario(Side side, double lambda0, ShapeParameter q,
                           const DiscreteMeasure& d, const GammaReversionMeasure& m,
                           const DescendOptions& options) {
    if (!d.has_source() || d.shape() != m.alpha || d.scale() != m.beta)
        throw AlignmentError("scenario requires d to be the quantile discretization of m");

    DiscreteDensity phi = worst_case_phi(side, lambda0, q, d);
    const double a_star = std::min(accuracy_from_phi(phi, q), 1.0);

    // Step 4-5 run on the same nodes (plain scheme) so the duality attains
    // on the discrete measure itself.
    TsVaRProblem problem(m, side, q, a_star, d.count(), Scheme::plain);
    const TsVaRSolution sol = descend(problem, options);

    const double attained =
        std::pow(a_star, q.value() - 1.0) * distorted_inverse_moment(d, phi, q);
    if (std::fabs(attained - sol.value) > 1e-3 * std::fabs(sol.value)) {
        std::ostringstream os;
        os << "scenario consistency violated: duality attainment " << attained
           << " vs descent value " << sol.value;
        throw ConvergenceError(os.str());
    }

    // Side bounds against the closed-form R, up to the quadrature gap of d.
    const double r_closed = inverse_moment(m);
    std::vector<double> inv(d.count());
    const auto nodes = d.nodes();
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / nodes[i];
    const double r_quad = pairwise_mean(inv);
    const double slack = 2.0 * std::fabs(r_closed - r_quad) + 1e-9 * r_closed;
    const bool bounded = side == Side::upper ? sol.value >= r_closed - slack
                                             : sol.value <= r_closed + slack;
    if (!bounded) {
        std::ostringstream os;
        os << "scenario bound violated: tsvar " << sol.value << " vs R " << r_closed;
        throw ConvergenceError(os.str());
    }

    return AmbiguityScenario{lambda0, std::move(phi), a_star,
                             sol.lambda_star, sol.value, sol.normalized, side};
}

std::vector<ScenarioPoint> scenario_sweep(Side side, std::span<const double> lambda0_grid,
                                          ShapeParameter q, const DiscreteMeasure& d,
                                          const GammaReversionMeasure& m) {
    std::vector<ScenarioPoint> out;
    out.reserve(lambda0_grid.size());
    for (double lam0 : lambda0_grid) {
        ScenarioPoint pt;
        pt.lambda0 = lam0;
        try {
            pt.scenario = scenario(side, lam0, q, d, m);
            out.push_back(std::move(pt));
        } catch (const Error& e) {
            pt.note = e.what();
            out.push_back(std::move(pt));
            break;  // later points sit deeper in the infeasible region
        }
    }
    return out;
}

}  // namespace tsvar
