#pragma once

// Principal-branch Lambert W on [-1/e, 0], the only interval the crossing
// analysis needs (x <= -1 implies x*e^x in [-1/e, 0)). Halley iteration with
// two seeds: the branch-point expansion near y = -1/e and the origin series
// near 0. Residual target 1e-15, iteration cap 50.

#include <cmath>
#include <stdexcept>

namespace swdiff {

// W0(y) for y in [-1/e, 0]; returns w in [-1, 0] with w*e^w = y.
// Outside the domain (with a small absolute slack of 1e-14 below -1/e to
// absorb rounding in callers' x*e^x) this throws std::domain_error.
inline double lambert_w0(double y) {
    if (std::isnan(y)) throw std::domain_error("lambert_w0: NaN input");
    if (y == 0.0) return 0.0;

    // q = y + 1/e measures the distance to the branch point. Computing it this
    // way (instead of 1 + e*y) keeps full precision: both addends are O(1/e),
    // so the subtraction is exact near the branch point, whereas 1 + e*y loses
    // about half the significant digits there.
    const double inv_e = std::exp(-1.0);
    const double q = y + inv_e;
    if (y > 0.0 || q < -1e-14)
        throw std::domain_error("lambert_w0: input outside [-1/e, 0]");
    if (q <= 0.0) return -1.0;

    double w;
    if (y < -0.25) {
        // Branch-point expansion in p = sqrt(2 e q):
        // W = -1 + p - p^2/3 + 11 p^3/72 - ...
        const double p = std::sqrt(2.0 * std::exp(1.0) * q);
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
    } else {
        // Origin series W = y - y^2 + (3/2) y^3 - ... as a Halley seed.
        w = y * (1.0 - y * (1.0 - 1.5 * y));
    }
    if (w >= 0.0) w = -1e-300;      // W < 0 for y < 0
    if (w <= -1.0) w = -1.0 + 1e-16;  // W > -1 strictly for y > -1/e

    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - y;
        if (std::abs(f) <= 1e-15) return w;
        const double wp1 = w + 1.0;
        // Halley: w' = w - f / (e^w (w+1) - (w+2) f / (2 (w+1)))
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double step = f / denom;
        double next = w - step;
        if (next >= 0.0) next = w / 2.0;
        if (next <= -1.0) next = (w - 1.0) / 2.0;
        if (next == w) return w;  // stagnation at double precision
        w = next;
    }
    return w;  // residual is still verified by tests; cap prevents livelock
}

}  // namespace swdiff
