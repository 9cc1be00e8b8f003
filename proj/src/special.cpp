// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#include "tsvar/special.hpp"

#include <cmath>
#include <limits>

#include "tsvar/errors.hpp"

namespace tsvar::special {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

double log_gamma_lanczos(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
    const double t = z + kLanczosG + 0.5;
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return half_log_two_pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0))
        throw DomainError("log_gamma requires a positive argument");
    if (x < 0.5) return log_gamma_lanczos(x + 1.0) - std::log(x);
    return log_gamma_lanczos(x);
}

double reg_lower_gamma(double a, double x) {
    if (!(a > 0.0))
        throw DomainError("reg_lower_gamma requires shape > 0");
    if (!(x >= 0.0))
        throw DomainError("reg_lower_gamma requires x >= 0");
    if (x == 0.0) return 0.0;

    constexpr int max_iter = 1000;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double log_prefactor = a * std::log(x) - x - log_gamma(a);

    if (x < a + 1.0) {
        // series: P(a,x) = x^a e^{-x} / Gamma(a) * sum_n x^n / (a (a+1)...(a+n))
        double ap = a;
        double term = 1.0 / a;
        double sum = term;
        for (int i = 0; i < max_iter; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * eps)
                return sum * std::exp(log_prefactor);
        }
        throw ConvergenceError("incomplete gamma series did not converge");
    }

    // Lentz continued fraction for Q(a,x)
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_iter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) {
            const double q = std::exp(log_prefactor) * h;
            return 1.0 - q;
        }
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

}  // namespace tsvar::special
