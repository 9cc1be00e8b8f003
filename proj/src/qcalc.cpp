// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#include "tsvar/qcalc.hpp"

#include <cmath>
#include <string>

#include "tsvar/numeric.hpp"

namespace tsvar {

double q_exp(double x, ShapeParameter q) {
    if (q.is_classical()) return std::exp(x);
    const double one_minus_q = 1.0 - q.value();
    const double base = 1.0 + one_minus_q * x;
    if (!(base > 0.0))
        throw DomainError("q_exp undefined: 1 + (1-q)x = " + std::to_string(base) +
                          " is not positive");
    return std::pow(base, 1.0 / one_minus_q);
}

double q_log(double x, ShapeParameter q) {
    if (!(x > 0.0))
        throw DomainError("q_log requires a positive argument");
    if (q.is_classical()) return std::log(x);
    const double one_minus_q = 1.0 - q.value();
    return (std::pow(x, one_minus_q) - 1.0) / one_minus_q;
}

DiscreteDensity::DiscreteDensity(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty())
        throw DomainError("discrete density must have at least one value");
    for (double v : values_)
        if (!(v > 0.0))
            throw DomainError("discrete density values must be strictly positive");
    const double mean = pairwise_mean(values_);
    if (std::fabs(mean - 1.0) > 1e-12)
        throw DomainError("discrete density mean is " + std::to_string(mean) +
                          ", expected 1 within 1e-12");
}

double tsallis_divergence(const DiscreteDensity& phi, ShapeParameter q) {
    const auto v = phi.values();
    std::vector<double> terms(v.size());
    if (q.is_classical()) {
        for (std::size_t i = 0; i < v.size(); ++i) terms[i] = v[i] * std::log(v[i]);
        return pairwise_mean(terms);
    }
    const double qq = q.value();
    for (std::size_t i = 0; i < v.size(); ++i) terms[i] = std::pow(v[i], qq);
    return (1.0 - pairwise_mean(terms)) / (1.0 - qq);
}

}  // namespace tsvar
