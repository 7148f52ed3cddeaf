#pragma once

#include <cmath>

#include "qcut/errors.hpp"

namespace qcut {

/// Achieved cut over the baseline optimum. Exceeds 1 when the baseline is
/// itself heuristic and got beaten.
inline double approximation_ratio(double achieved, double optimum) {
    if (!(optimum > 0.0)) throw config_error("approximation ratio needs a positive baseline cut");
    return achieved / optimum;
}

/// Logistic time-efficiency score in (0, 1): 1/(1 + e^{alpha (t_alg - t_base)}).
/// Equal times give exactly 0.5; the exponent is clamped to +-700 so extreme
/// gaps saturate instead of overflowing.
inline double efficiency_factor(double t_alg, double t_base, double alpha) {
    if (!(alpha > 0.0)) throw config_error("efficiency exponent alpha must be positive");
    if (t_alg < 0.0 || t_base < 0.0) throw config_error("negative runtime");
    double x = alpha * (t_alg - t_base);
    if (x > 700.0) x = 700.0;
    if (x < -700.0) x = -700.0;
    return 1.0 / (1.0 + std::exp(x));
}

/// Combined quality/speed score on a 0-100 scale: AR * EF * 100.
inline double performance_efficiency_index(double ar, double ef) {
    if (ar < 0.0) throw config_error("approximation ratio cannot be negative");
    if (!(ef > 0.0) || ef > 1.0) throw config_error("efficiency factor must lie in (0, 1]");
    return ar * ef * 100.0;
}

} // namespace qcut
