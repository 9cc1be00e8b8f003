// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <span>
#include <vector>

#include "tsvar/errors.hpp"

namespace tsvar {

/**
 * Shape parameter q > 0 of the deformed-exponential family.
 *
 * q = 1 recovers the classical exp/log pair and is dispatched exactly on
 * the stored bits, never by a numerical threshold; callers wanting the
 * classical limit must pass 1.0 explicitly.
 */
class ShapeParameter {
  public:
    explicit ShapeParameter(double q) : q_(q) {
        if (!(q > 0.0))
            throw DomainError("shape parameter q must be > 0");
    }

    double value() const noexcept { return q_; }
    bool is_classical() const noexcept { return q_ == 1.0; }

  private:
    double q_;
};

/**
 * q-exponential: (1 + (1-q) x)^{1/(1-q)} for q != 1, exp(x) for q = 1.
 *
 * Defined only where 1 + (1-q) x > 0; outside that set the function has no
 * value and a DomainError is raised. The result is always positive.
 */
double q_exp(double x, ShapeParameter q);

/**
 * q-logarithm: (x^{1-q} - 1)/(1-q) for q != 1, ln(x) for q = 1. Requires x > 0.
 * Inverse of q_exp on its range.
 */
double q_log(double x, ShapeParameter q);

/**
 * A positive density against an N-point uniform-weight discrete measure.
 *
 * Values are a Radon-Nikodym derivative sampled at the measure's nodes;
 * every entry must be strictly positive and the mean must equal 1 within
 * 1e-12 so that the distorted measure stays a probability measure.
 */
class DiscreteDensity {
  public:
    explicit DiscreteDensity(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

  private:
    std::vector<double> values_;
};

/**
 * Tsallis divergence H_q(phi) = (1 - (1/N) sum phi_i^q) / (1 - q) of a
 * density against the uniform-weight reference.
 *
 * q = 1 evaluates the Kullback-Leibler limit (1/N) sum phi_i ln phi_i.
 * Nonnegative, zero exactly at phi == 1.
 */
double tsallis_divergence(const DiscreteDensity& phi, ShapeParameter q);

}  // namespace tsvar
