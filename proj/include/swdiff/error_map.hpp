#pragma once

// Executable convergence analysis: closed-form inter-crossing interval and
// error return map (via Lambert W), the pre-crossing transient solution, and
// a brute-force RK4+bisection oracle over the worst-case error dynamics
//   de_alpha/dt = -k e_alpha + e_sigma,   de_sigma/dt = -L_delta sgn(e_alpha)
// that independently verifies the closed forms.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lambert_w.hpp"

namespace swdiff {

struct ErrorMapParams {
    double k;        // tracking gain [1/s]
    double L_delta;  // effective switching margin L - L*
    double rho;      // L_delta / k, the map's only length scale

    ErrorMapParams(double k_, double L_delta_) : k(k_), L_delta(L_delta_), rho(L_delta_ / k_) {
        if (!(k > 0.0) || !(L_delta > 0.0))
            throw std::invalid_argument("ErrorMapParams: k and L_delta must be positive");
    }
};

struct CrossingRecord {
    double e_sigma_in = 0.0;
    double t_delta = 0.0;    // interval to the next e_alpha zero [s]
    double e_sigma_out = 0.0;
    double r = 0.0;          // worst-case drive, -L_delta * sgn(e_sigma_in)
};

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// x = -|e_sigma|/rho - 1, the Lambert-W argument's exponent variable.
inline double map_x(double e_sigma, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("map_x: rho must be positive");
    return -std::abs(e_sigma) / rho - 1.0;
}

namespace detail {

// g(u) = 1 + W(-(1+u) e^{-(1+u)}) for u >= 0, so that
//   |e_out| = rho * g(u),  t_delta = (u + g(u)) / k,  u = |e_in|/rho.
// Near u = 0 the direct form loses all precision (W -> -1), so a series in u
// is used: g(u) = u - (2/3) u^2 + (4/9) u^3 - (44/135) u^4 + O(u^5).
// For large u, x*e^x underflows to -0, W returns 0, and g -> 1 — the map's
// saturation limit |e_out| -> rho, which is the correct asymptote.
inline double crossing_gain(double u) {
    if (u < 0.0 || !std::isfinite(u)) throw std::invalid_argument("crossing_gain: u must be >= 0");
    if (u == 0.0) return 0.0;
    if (u < 1e-4)
        return u * (1.0 - u * (2.0 / 3.0 - u * (4.0 / 9.0 - u * (44.0 / 135.0))));
    const double x = -1.0 - u;
    return 1.0 + lambert_w0(x * std::exp(x));
}

}  // namespace detail

// t_delta^i of Eq. (19): -e/r + (1/k)(1 + W(x e^x)) with r = -L_delta sgn(e),
// which reduces to (u + g(u))/k.
inline double crossing_interval(double e_sigma, const ErrorMapParams& p) {
    if (e_sigma == 0.0) return 0.0;
    const double u = std::abs(e_sigma) / p.rho;
    return (u + detail::crossing_gain(u)) / p.k;
}

// The return map of Eq. (22): e_out = -sgn(e) rho (1 + W(x e^x)).
inline double next_crossing_error(double e_sigma, const ErrorMapParams& p) {
    if (e_sigma == 0.0) return 0.0;
    const double u = std::abs(e_sigma) / p.rho;
    return -sgn(e_sigma) * p.rho * detail::crossing_gain(u);
}

// Central-difference slope of the map at the origin; Eq. (23) predicts -1.
inline double map_slope_at_origin(const ErrorMapParams& p) {
    const double h = 1e-6 * p.rho;
    return (next_crossing_error(h, p) - next_crossing_error(-h, p)) / (2.0 * h);
}

inline CrossingRecord make_crossing_record(double e_sigma, const ErrorMapParams& p) {
    CrossingRecord rec;
    rec.e_sigma_in = e_sigma;
    rec.r = -p.L_delta * sgn(e_sigma);
    rec.t_delta = crossing_interval(e_sigma, p);
    rec.e_sigma_out = next_crossing_error(e_sigma, p);
    return rec;
}

// n successive map applications; magnitudes contract, signs alternate.
inline std::vector<CrossingRecord> iterate_map(double e0, const ErrorMapParams& p, unsigned n) {
    if (n < 1) throw std::invalid_argument("iterate_map: n must be >= 1");
    std::vector<CrossingRecord> out;
    out.reserve(n);
    double e = e0;
    for (unsigned i = 0; i < n; ++i) {
        out.push_back(make_crossing_record(e, p));
        e = out.back().e_sigma_out;
    }
    return out;
}

// Closed-form pre-crossing transient of Eqs. (9)-(11): for the branch with
// constant drive r = -sign_branch * L_delta,
//   e_alpha^d(t) = (e_d0 + sign_branch*rho) e^{-kt} - sign_branch*rho.
inline double transient_solution(double e_d0, const ErrorMapParams& p, double t, int sign_branch) {
    if (t < 0.0) throw std::invalid_argument("transient_solution: t must be >= 0");
    if (sign_branch != 1 && sign_branch != -1)
        throw std::invalid_argument("transient_solution: sign_branch must be +1 or -1");
    const double s = static_cast<double>(sign_branch);
    return (e_d0 + s * p.rho) * std::exp(-p.k * t) - s * p.rho;
}

namespace detail {

struct ErrState {
    double ea, es;
};

// One RK4 step of the frozen-branch error dynamics (s = sgn held constant;
// between crossings the true sgn is constant, so freezing is exact).
inline ErrState err_rk4_step(ErrState x, double dt, double k, double L_delta, double s) {
    auto f = [&](ErrState v) { return ErrState{-k * v.ea + v.es, -L_delta * s}; };
    const ErrState k1 = f(x);
    const ErrState k2 = f({x.ea + 0.5 * dt * k1.ea, x.es + 0.5 * dt * k1.es});
    const ErrState k3 = f({x.ea + 0.5 * dt * k2.ea, x.es + 0.5 * dt * k2.es});
    const ErrState k4 = f({x.ea + dt * k3.ea, x.es + dt * k3.es});
    return {x.ea + dt / 6.0 * (k1.ea + 2.0 * k2.ea + 2.0 * k3.ea + k4.ea),
            x.es + dt / 6.0 * (k1.es + 2.0 * k2.es + 2.0 * k3.es + k4.es)};
}

}  // namespace detail

// Brute-force oracle: integrate the worst-case error dynamics with exact sgn
// from (e_alpha0, e_sigma0), bracket the next zero of e_alpha, refine it by
// bisection over a partial RK4 step, and return the measured crossing.
// The branch s is sgn(e_alpha0), or sgn(e_sigma0) when starting on the
// surface (the error leaves zero in the direction e_sigma pushes it).
inline CrossingRecord oracle_crossing(double e_alpha0, double e_sigma0, const ErrorMapParams& p,
                                      double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("oracle_crossing: dt must be positive");
    if (e_alpha0 == 0.0 && e_sigma0 == 0.0) return CrossingRecord{};  // equilibrium

    const double s = e_alpha0 != 0.0 ? sgn(e_alpha0) : sgn(e_sigma0);
    const double horizon = 10.0 * (std::abs(e_sigma0) / p.L_delta + 1.0 / p.k);

    detail::ErrState x{e_alpha0, e_sigma0};
    double t = 0.0;
    // Bracket: first step where e_alpha's sign (relative to the branch s)
    // is no longer strictly positive after having left the surface.
    bool left_surface = s * e_alpha0 > 0.0;
    while (t < horizon) {
        const detail::ErrState next = detail::err_rk4_step(x, dt, p.k, p.L_delta, s);
        const double tn = t + dt;
        if (left_surface && s * next.ea <= 0.0) {
            // Bisect the partial-step length tau in (0, dt] from (t, x).
            double lo = 0.0, hi = dt;
            detail::ErrState at_hi = next;
            for (int it = 0; it < 120 && hi - lo > 1e-16 * dt; ++it) {
                const double mid = 0.5 * (lo + hi);
                const detail::ErrState xm = detail::err_rk4_step(x, mid, p.k, p.L_delta, s);
                if (s * xm.ea <= 0.0) {
                    hi = mid;
                    at_hi = xm;
                } else {
                    lo = mid;
                }
            }
            CrossingRecord rec;
            rec.e_sigma_in = e_sigma0;
            rec.t_delta = t + hi;
            rec.e_sigma_out = at_hi.es;
            rec.r = -p.L_delta * s;
            return rec;
        }
        if (s * next.ea > 0.0) left_surface = true;
        x = next;
        t = tn;
    }
    throw std::runtime_error(
        "oracle_crossing: no crossing within horizon (dt too coarse or degenerate parameters)");
}

}  // namespace swdiff
