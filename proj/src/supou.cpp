// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#include "tsvar/supou.hpp"

#include <cmath>

#include "tsvar/numeric.hpp"
#include "tsvar/special.hpp"

namespace tsvar {

double levy_moment(const TemperedStableLevy& l, int k) {
    if (k < 1)
        throw DomainError("Levy moments are defined for k >= 1");
    const double kc = static_cast<double>(k) - l.stability;
    return l.intensity * std::exp((l.stability - k) * std::log(l.tempering) +
                                  special::log_gamma(kc));
}

ActivityClass activity_class(const TemperedStableLevy& l) {
    return l.stability < 0.0 ? ActivityClass::finite : ActivityClass::infinite;
}

StationaryStats stationary_stats(const SupOUModel& model) {
    const double r = inverse_moment(model.reversion);
    StationaryStats s{};
    s.mean = levy_moment(model.levy, 1) * r + model.shift;
    s.variance = levy_moment(model.levy, 2) * r / 2.0;
    s.third_central = levy_moment(model.levy, 3) * r / 3.0;
    s.fourth_cumulant = levy_moment(model.levy, 4) * r / 4.0;
    s.skew_normalized = s.third_central / std::pow(s.variance, 1.5);
    s.kurt_normalized = s.fourth_cumulant / (s.variance * s.variance);
    return s;
}

double distorted_inverse_moment(const DiscreteMeasure& d, const DiscreteDensity& phi,
                                ShapeParameter q) {
    if (d.count() != phi.size())
        throw AlignmentError("density has " + std::to_string(phi.size()) +
                             " values but the measure has " + std::to_string(d.count()) +
                             " nodes");
    const auto r = d.nodes();
    const auto p = phi.values();
    std::vector<double> terms(d.count());
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = std::pow(p[i], q.value()) / r[i];
    return pairwise_mean(terms);
}

}  // namespace tsvar
