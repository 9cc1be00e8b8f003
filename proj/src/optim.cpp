// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#include "tsvar/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tsvar {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& options) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> x(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += options.step;
    std::vector<double> fx(n + 1);
    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& p) {
        ++evals;
        return f(p);
    };
    for (std::size_t j = 0; j <= n; ++j) fx[j] = eval(x[j]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xx(n);

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        {
            std::vector<std::vector<double>> x2(n + 1);
            std::vector<double> f2(n + 1);
            for (std::size_t j = 0; j <= n; ++j) {
                x2[j] = x[order[j]];
                f2[j] = fx[order[j]];
            }
            x.swap(x2);
            fx.swap(f2);
        }

        double diameter = 0.0, scale = 1.0;
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                diameter = std::max(diameter, std::fabs(x[j][i] - x[0][i]));
                scale = std::max(scale, std::fabs(x[0][i]));
            }
        if (diameter <= options.tolerance * scale) break;

        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) c += x[j][i];
            centroid[i] = c / static_cast<double>(n);
        }

        for (std::size_t i = 0; i < n; ++i) xr[i] = centroid[i] + (centroid[i] - x[n][i]);
        const double fr = eval(xr);

        if (fr < fx[0]) {
            for (std::size_t i = 0; i < n; ++i) xx[i] = centroid[i] + 2.0 * (xr[i] - centroid[i]);
            const double fe = eval(xx);
            if (fe < fr) {
                x[n] = xx;
                fx[n] = fe;
            } else {
                x[n] = xr;
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            x[n] = xr;
            fx[n] = fr;
        } else {
            const bool outside = fr < fx[n];
            const auto& toward = outside ? xr : x[n];
            for (std::size_t i = 0; i < n; ++i)
                xx[i] = centroid[i] + 0.5 * (toward[i] - centroid[i]);
            const double fc = eval(xx);
            if (fc < (outside ? fr : fx[n])) {
                x[n] = xx;
                fx[n] = fc;
            } else {
                for (std::size_t j = 1; j <= n; ++j) {
                    for (std::size_t i = 0; i < n; ++i)
                        x[j][i] = x[0][i] + 0.5 * (x[j][i] - x[0][i]);
                    fx[j] = eval(x[j]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t j = 1; j <= n; ++j)
        if (fx[j] < fx[best]) best = j;
    return {x[best], fx[best], evals};
}

SimplexResult nelder_mead_restarted(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const SimplexOptions& options,
                                    std::size_t max_restarts) {
    SimplexResult best = nelder_mead(f, std::move(x0), options);
    for (std::size_t k = 0; k < max_restarts; ++k) {
        SimplexOptions o = options;
        o.step = (k % 2 == 0) ? options.step : options.step * 0.2;
        SimplexResult r = nelder_mead(f, best.x, o);
        r.evaluations += best.evaluations;
        const bool improved =
            r.value < best.value - (1e-20 + 1e-12 * std::fabs(best.value));
        if (r.value < best.value) best = std::move(r);
        if (!improved) break;
    }
    return best;
}

}  // namespace tsvar
