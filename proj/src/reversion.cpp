// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#include "tsvar/reversion.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "tsvar/numeric.hpp"
#include "tsvar/special.hpp"

namespace tsvar {

double inverse_moment(const GammaReversionMeasure& m) {
    return 1.0 / (m.beta * (m.alpha - 1.0));
}

double acf_theoretical(const GammaReversionMeasure& m, double tau) {
    if (!(tau >= 0.0))
        throw DomainError("autocorrelation lag must be nonnegative");
    return std::pow(1.0 + m.beta * tau, -(m.alpha - 1.0));
}

double gamma_quantile(double shape, double scale, double p) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw DomainError("gamma_quantile requires positive shape and scale");
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("gamma_quantile requires p in (0, 1)");

    // Work at unit scale: solve P(shape, x) = p.
    // Upper bracket from shape*50, expanded geometrically.
    double hi = shape * 50.0;
    int guard = 0;
    while (special::reg_lower_gamma(shape, hi) < p) {
        hi *= 4.0;
        if (++guard > 600)
            throw ConvergenceError("gamma_quantile: upper bracket expansion failed");
    }
    // Lower bracket by geometric shrink; quantiles can be far below the mean
    // for small shapes, so this runs in log space.
    double lo = hi;
    guard = 0;
    while (special::reg_lower_gamma(shape, lo) >= p) {
        lo *= 0.25;
        if (lo < 1e-305 || ++guard > 600)
            throw ConvergenceError("gamma_quantile: lower bracket shrink failed");
    }

    // Bisection on log x until the bracket is 1e-3 relative.
    double ylo = std::log(lo), yhi = std::log(hi);
    while (yhi - ylo > 1e-3) {
        const double ymid = 0.5 * (ylo + yhi);
        if (special::reg_lower_gamma(shape, std::exp(ymid)) < p)
            ylo = ymid;
        else
            yhi = ymid;
    }

    // Guarded Newton in log space; d/dy P(shape, e^y) = exp(shape*y - e^y - lgamma(shape)).
    const double lg = special::log_gamma(shape);
    double y = 0.5 * (ylo + yhi);
    for (int it = 0; it < 100; ++it) {
        const double x = std::exp(y);
        const double f = special::reg_lower_gamma(shape, x) - p;
        if (f > 0.0)
            yhi = std::min(yhi, y);
        else
            ylo = std::max(ylo, y);
        const double dfdy = std::exp(shape * y - x - lg);
        double step = (dfdy > 0.0) ? -f / dfdy : 0.0;
        if (step == 0.0 && f != 0.0) step = (f > 0.0) ? -(y - ylo) * 0.5 : (yhi - y) * 0.5;
        double ynew = y + step;
        if (!(ynew > ylo && ynew < yhi)) ynew = 0.5 * (ylo + yhi);
        const double dy = std::fabs(ynew - y);
        y = ynew;
        if (dy < 1e-13 * (1.0 + std::fabs(y))) return scale * std::exp(y);
    }
    throw ConvergenceError("gamma_quantile: Newton polish did not converge");
}

namespace {

using NodeKey = std::tuple<double, double, std::size_t>;

std::shared_ptr<const std::vector<double>> quantile_nodes(double shape, double scale,
                                                          std::size_t count) {
    static std::mutex mutex;
    static std::map<NodeKey, std::shared_ptr<const std::vector<double>>> cache;

    const NodeKey key{shape, scale, count};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    auto nodes = std::make_shared<std::vector<double>>(count);
    const double denom = 2.0 * static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double p = (2.0 * static_cast<double>(i) + 1.0) / denom;
        (*nodes)[i] = gamma_quantile(shape, scale, p);
    }

    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(nodes));
    return it->second;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::quantiles(double shape, double scale, std::size_t count) {
    if (count < 1)
        throw DomainError("discretization needs at least one node");
    if (!(shape > 0.0) || !(scale > 0.0))
        throw DomainError("discretization requires positive shape and scale");
    return DiscreteMeasure(shape, scale, quantile_nodes(shape, scale, count));
}

DiscreteMeasure DiscreteMeasure::quantiles(const GammaReversionMeasure& m, std::size_t count) {
    return quantiles(m.alpha, m.beta, count);
}

DiscreteMeasure DiscreteMeasure::from_nodes(std::vector<double> nodes) {
    if (nodes.empty())
        throw DomainError("discrete measure needs at least one node");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(nodes[i] > 0.0))
            throw DomainError("discrete measure nodes must be positive");
        if (i > 0 && !(nodes[i] > nodes[i - 1]))
            throw DomainError("discrete measure nodes must be strictly increasing");
    }
    return DiscreteMeasure(0.0, 0.0,
                           std::make_shared<const std::vector<double>>(std::move(nodes)));
}

TiltedMeasure tilt(const GammaReversionMeasure& m, ShapeParameter q) {
    const double upper = 1.0 - 1.0 / m.alpha;
    if (!(q.value() > 0.0) || !(q.value() < upper)) {
        std::ostringstream os;
        os << "tilted measure requires q in (0, " << upper << "); got q = " << q.value();
        throw FeasibilityError(os.str());
    }
    const double exponent = 1.0 / (1.0 - q.value());
    const double shape = m.alpha - exponent;
    const double prefactor = std::exp(special::log_gamma(shape) - special::log_gamma(m.alpha) -
                                      exponent * std::log(m.beta));
    return TiltedMeasure{shape, m.beta, prefactor};
}

double integrate_qexp_upper(const GammaReversionMeasure& m, ShapeParameter q, double lambda,
                            std::size_t count, Scheme scheme) {
    if (!(lambda > 0.0))
        throw DomainError("integrate_qexp_upper requires lambda > 0");
    const double upper = 1.0 - 1.0 / m.alpha;
    if (!(q.value() > 0.0) || !(q.value() < upper)) {
        std::ostringstream os;
        os << "upper-side integral requires q in (0, " << upper << "); got q = " << q.value();
        throw FeasibilityError(os.str());
    }
    const double one_minus_q = 1.0 - q.value();
    const double exponent = 1.0 / one_minus_q;

    if (scheme == Scheme::plain) {
        const auto d = DiscreteMeasure::quantiles(m, count);
        std::vector<double> terms(d.count());
        const auto r = d.nodes();
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double base = 1.0 + one_minus_q * lambda / r[i];
            terms[i] = std::pow(base, exponent);
        }
        return pairwise_mean(terms);
    }

    const TiltedMeasure tm = tilt(m, q);
    const auto d = DiscreteMeasure::quantiles(tm.shape, tm.scale, count);
    std::vector<double> terms(d.count());
    const auto r = d.nodes();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double base = 1.0 + one_minus_q * lambda / r[i];
        terms[i] = std::pow(r[i] * base, exponent);  // r^{1/(1-q)} exp_q(lambda/r)
    }
    return tm.prefactor * pairwise_mean(terms);
}

double integrate_qexp_lower(const GammaReversionMeasure& m, ShapeParameter q, double lambda,
                            std::size_t count) {
    if (!(lambda > 0.0))
        throw DomainError("integrate_qexp_lower requires lambda > 0");
    if (!(q.value() >= 1.0))
        throw FeasibilityError("lower-side integral requires q >= 1; got q = " +
                               std::to_string(q.value()));
    const auto d = DiscreteMeasure::quantiles(m, count);
    std::vector<double> terms(d.count());
    const auto r = d.nodes();
    if (q.is_classical()) {
        for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::exp(-lambda / r[i]);
    } else {
        const double one_minus_q = 1.0 - q.value();
        const double exponent = 1.0 / one_minus_q;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double base = 1.0 - one_minus_q * lambda / r[i];
            terms[i] = std::pow(base, exponent);
        }
    }
    return pairwise_mean(terms);
}

}  // namespace tsvar
