// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsvar/supou.hpp"

namespace tsvar {

/**
 * Hourly discharge record. Timestamps are stored as whole hours since the
 * first sample; gaps (missing hours) are allowed up to 5% of the record span
 * and are skipped pairwise by the autocorrelation estimator.
 */
struct TimeSeries {
    std::vector<std::int64_t> hours;  ///< strictly increasing, hours since epoch
    std::vector<double> values;       ///< discharge, m^3/s, >= 0
    std::size_t gap_segments = 0;     ///< number of contiguous holes in the grid
    std::size_t missing_hours = 0;    ///< total missing samples inside the span
    std::string first_timestamp;
    std::string last_timestamp;

    std::size_t size() const noexcept { return values.size(); }
    std::int64_t span_hours() const noexcept {
        return hours.empty() ? 0 : hours.back() - hours.front() + 1;
    }
};

/// Sample statistics with population (1/n) central-moment estimators.
struct EmpiricalMoments {
    double mean;
    double variance;
    double skew_normalized;  ///< m3 / m2^{3/2}
    double kurt_normalized;  ///< m4 / m2^2 - 3 (excess)
    double min_value;
    std::size_t count;
};

/// Outcome of the two-stage identification.
struct FitReport {
    SupOUModel model;
    std::size_t acf_lag_cutoff;
    std::array<double, 4> residuals;  ///< relative errors: mean, variance, skew, kurt
    double objective_value;           ///< sum of squared relative errors
    EmpiricalMoments observed;
};

/**
 * Parse a `timestamp,discharge` CSV (header required, ISO-8601 timestamps on
 * the hour, UTF-8). Raises ParseError on malformed rows or negative
 * discharge, GridError on off-grid timestamps or when more than 5% of the
 * span is missing.
 */
TimeSeries load_series(const std::filesystem::path& path);

/**
 * Biased sample autocorrelation rho(tau) for tau = 0..max_lag: lagged
 * products over pairs that do not span a gap, normalized by the total sum
 * of squares. rho(0) = 1.
 */
std::vector<double> empirical_acf(const TimeSeries& ts, std::size_t max_lag);

/**
 * Largest lag up to which the estimated autocorrelation stays positive:
 * one before the first non-positive entry, or the last index when every
 * entry is positive.
 */
std::size_t positive_lag_cutoff(std::span<const double> acf);

/**
 * Stage 1: least-squares fit of (alpha, beta) so the subexponential ACF
 * (1 + beta tau)^{-(alpha-1)} matches the estimate over lags 1..cutoff.
 *
 * Deterministic Nelder-Mead over (log(alpha-1), log beta), started from
 * alpha = 1.5 and beta = 3 / (first lag below 0.5). BoundaryError when the
 * optimizer pins alpha against its alpha > 1 floor.
 */
GammaReversionMeasure fit_reversion(std::span<const double> acf, std::size_t cutoff);

/// Population moments of the record. DegenerateError on zero variance.
EmpiricalMoments empirical_moments(const TimeSeries& ts);

/**
 * Stage 2: least-squares fit of (A, B, C, shift) minimizing the sum of
 * squared relative errors of the four stationary statistics against the
 * sample moments, with the reversion measure fixed.
 *
 * Free parameters run through log transforms (C through 1 - e^t), the
 * shift starts at the observed minimum, and the simplex restarts until the
 * objective stops improving. InfeasibleError when no candidate beats the
 * jump-free degenerate model.
 */
std::pair<TemperedStableLevy, double> fit_levy(const EmpiricalMoments& emp,
                                               const GammaReversionMeasure& m);

/// The full pipeline: ACF -> cutoff -> stage 1 -> moments -> stage 2.
FitReport fit_model(const TimeSeries& ts, std::size_t max_lag);

namespace detail {
/// Stage-2 objective against explicit target moments (test hook).
double moment_objective(const GammaReversionMeasure& m, const TemperedStableLevy& levy,
                        double shift, const EmpiricalMoments& target);
}  // namespace detail

}  // namespace tsvar
