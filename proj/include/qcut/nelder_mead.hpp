#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "qcut/errors.hpp"

namespace qcut {

struct NelderMeadOptions {
    int max_evals = 200;        // hard budget on objective evaluations
    double tolerance = 1e-5;    // stop when max-min simplex value spread falls below
    double initial_step = 0.2;  // per-coordinate offset building the first simplex
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evals = 0;
    bool converged = false;  // tolerance reached before the budget ran out
};

/// Downhill simplex minimizer with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, 0.5, 0.5). Never exceeds
/// max_evals objective calls; returns the best point seen either way.
template <typename F>
NelderMeadResult nelder_mead_minimize(F&& f, std::vector<double> x0, NelderMeadOptions opt = {}) {
    const std::size_t n = x0.size();
    if (n == 0) throw config_error("optimizer needs at least one dimension");
    if (opt.max_evals < 1) throw config_error("optimizer budget must be positive");

    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x, double& out) {
        if (res.evals >= opt.max_evals) return false;
        out = f(x);
        ++res.evals;
        if (res.x.empty() || out < res.value ||
            (out == res.value && x < res.x)) {
            res.value = out;
            res.x = x;
        }
        return true;
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    bool budget_left = eval(pts[0], fv[0]);
    for (std::size_t i = 1; i <= n && budget_left; ++i) {
        pts[i][i - 1] += opt.initial_step;
        budget_left = eval(pts[i], fv[i]);
    }
    if (!budget_left) return res;

    std::vector<std::size_t> order(n + 1);
    for (;;) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];

        if (fv[worst] - fv[best] <= opt.tolerance) {
            res.converged = true;
            return res;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d];
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double t) {
            // point = centroid + t * (centroid - worst)
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + t * (centroid[d] - pts[worst][d]);
            return p;
        };

        auto reflected = blend(1.0);
        double fr;
        if (!eval(reflected, fr)) return res;

        if (fr < fv[best]) {
            auto expanded = blend(2.0);
            double fe;
            if (!eval(expanded, fe)) return res;
            if (fe < fr) {
                pts[worst] = std::move(expanded);
                fv[worst] = fe;
            } else {
                pts[worst] = std::move(reflected);
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = std::move(reflected);
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            auto contracted = blend(outside ? 0.5 : -0.5);
            double fc;
            if (!eval(contracted, fc)) return res;
            if (fc < (outside ? fr : fv[worst])) {
                pts[worst] = std::move(contracted);
                fv[worst] = fc;
            } else {
                // shrink every point toward the best one
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
                    if (!eval(pts[i], fv[i])) return res;
                }
            }
        }
    }
}

} // namespace qcut
