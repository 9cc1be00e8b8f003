// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include "tsvar/qcalc.hpp"
#include "tsvar/reversion.hpp"

namespace tsvar {

/**
 * Tempered-stable Levy measure nu(dz) = A exp(-B z) / z^{1+C} dz, z > 0.
 *
 * A > 0 sets the intensity, B > 0 the tempering, and the stability index
 * C < 1 keeps every moment M_k = A B^{C-k} Gamma(k-C) finite for k >= 1.
 */
struct TemperedStableLevy {
    double intensity;  ///< A, hour * s^{-C} * m^{3C}
    double tempering;  ///< B, s/m^3
    double stability;  ///< C, dimensionless

    TemperedStableLevy(double a, double b, double c)
        : intensity(a), tempering(b), stability(c) {
        if (!(a > 0.0)) throw DomainError("Levy intensity A must be > 0");
        if (!(b > 0.0)) throw DomainError("Levy tempering B must be > 0");
        if (!(c < 1.0)) throw DomainError("Levy stability index C must be < 1");
    }
};

/// Fitted supOU model: reversion measure, jump measure, minimum-discharge shift.
struct SupOUModel {
    GammaReversionMeasure reversion;
    TemperedStableLevy levy;
    double shift;  ///< m^3/s, >= 0

    SupOUModel(GammaReversionMeasure r, TemperedStableLevy l, double shift_)
        : reversion(r), levy(l), shift(shift_) {
        if (!(shift >= 0.0)) throw DomainError("discharge shift must be >= 0");
    }
};

/// Stationary moments of the shifted process.
struct StationaryStats {
    double mean;             ///< m^3/s
    double variance;         ///< m^6/s^2
    double third_central;    ///< m^9/s^3
    double fourth_cumulant;  ///< m^12/s^4 (fourth central moment minus 3 variance^2)
    double skew_normalized;  ///< third_central / variance^{3/2}
    double kurt_normalized;  ///< fourth_cumulant / variance^2
};

/// k-th moment M_k = A B^{C-k} Gamma(k-C) of the jump-size measure, k >= 1.
double levy_moment(const TemperedStableLevy& l, int k);

enum class ActivityClass { finite, infinite };

/**
 * Jump activity of the subordinator: finite for C < 0 (compound Poisson,
 * total mass A B^C Gamma(-C) < infinity), infinite for 0 <= C < 1.
 */
ActivityClass activity_class(const TemperedStableLevy& l);

/**
 * Closed-form stationary statistics: mean = M_1 R + shift, variance = M_2 R / 2,
 * third central moment = M_3 R / 3, fourth cumulant = M_4 R / 4. Only the mean
 * feels the shift.
 */
StationaryStats stationary_stats(const SupOUModel& model);

/**
 * Distorted inverse moment (1/N) sum phi_i^q / r_i: the inverse moment of
 * reversion speeds under the measure distorted by the density phi, in the
 * Tsallis sense.
 *
 * phi must be aligned with d node-for-node (AlignmentError otherwise).
 */
double distorted_inverse_moment(const DiscreteMeasure& d, const DiscreteDensity& phi,
                                ShapeParameter q);

}  // namespace tsvar
