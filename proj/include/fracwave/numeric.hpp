#pragma once

#include <cmath>
#include <numbers>

namespace fracwave {

/// sin(pi x) with the argument reduced exactly, so integers give exact zeros.
inline double sinpi(double x) {
    const double r = x - 2.0 * std::nearbyint(0.5 * x);
    if (r == 0.0 || std::fabs(r) == 1.0) return 0.0;
    if (r == 0.5) return 1.0;
    if (r == -0.5) return -1.0;
    return std::sin(std::numbers::pi * r);
}

}  // namespace fracwave
