#pragma once

// Reference differentiators the experiments compare against:
//  - 5th-order high-gain observer, Eq. (26): linear, fast, peaking-prone.
//  - 5th-order HOSM differentiator, Eq. (27): recursive fractional-power
//    chain ending in a sgn term, exact in finite time but chattering.

#include <array>
#include <functional>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "integrators.hpp"
#include "signals.hpp"
#include "switching_differentiator.hpp"

namespace swdiff {

struct HgoConfig {
    std::array<double, 5> c{};  // c0..c4
    double epsilon = 0.0;

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("HgoConfig: epsilon must be positive");
        for (double ci : c)
            if (!std::isfinite(ci)) throw std::invalid_argument("HgoConfig: gains must be finite");
    }
};

// The benchmark gains: c0=47.5, ..., c4=77378.09375, eps=0.03 (stored as
// given; they follow a binomial-like pattern but are not re-derived here).
inline HgoConfig hgo_paper_config() {
    return {{47.5, 902.5, 8573.75, 40725.3125, 77378.09375}, 0.03};
}

struct HosmConfig {
    double L = 0.0;  // Lipschitz bound on a^(5)
    // Final-stage switch: exact sgn by default (chattering is the phenomenon
    // of interest); a sat surrogate is available for stiffness relief and
    // outputs are labeled with the mode that produced them.
    SwitchSpec final_switch{SwitchKind::ExactSgn, 1e-4};

    void validate() const {
        if (!(L > 0.0)) throw std::invalid_argument("HosmConfig: L must be positive");
    }
};

inline HosmConfig hosm_paper_config() { return {3e7, {SwitchKind::ExactSgn, 1e-4}}; }

// |x|^p sgn(x) for p in (0, 1]; odd and monotone nondecreasing.
inline double signed_power(double x, double p) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("signed_power: p must be in (0, 1]");
    if (x == 0.0) return 0.0;
    return x > 0.0 ? std::pow(x, p) : -std::pow(-x, p);
}

// Eq. (26): dz_i/dt = z_{i+1} + (c_i/eps^{i+1})(a - z0) for i < 4,
//           dz_4/dt = (c_4/eps^5)(a - z0).
inline std::array<double, 5> hgo_rhs(const std::array<double, 5>& z, double a_value,
                                     const HgoConfig& cfg) {
    cfg.validate();
    const double e = a_value - z[0];
    std::array<double, 5> d{};
    double eps_pow = cfg.epsilon;
    for (int i = 0; i < 5; ++i) {
        d[i] = (cfg.c[static_cast<std::size_t>(i)] / eps_pow) * e;
        if (i < 4) d[i] += z[static_cast<std::size_t>(i) + 1];
        eps_pow *= cfg.epsilon;
    }
    return d;
}

// Eq. (27), with the recursive v-chain computed in order:
//   v0 = -8 L^{1/5} spow(z0 - a, 4/5),        dz0/dt = v0
//   v1 = -5 L^{1/4} spow(z1 - v0, 3/4),       dz1/dt = v1
//   v2 = -3 L^{1/3} spow(z2 - v1, 2/3),       dz2/dt = v2
//   v3 = -1.5 L^{1/2} spow(z3 - v2, 1/2),     dz3/dt = v3
//   dz4/dt = -1.1 L sgn(z4 - v3)
inline std::array<double, 5> hosm_rhs(const std::array<double, 5>& z, double a_value,
                                      const HosmConfig& cfg) {
    cfg.validate();
    const double v0 = -8.0 * std::pow(cfg.L, 1.0 / 5.0) * signed_power(z[0] - a_value, 4.0 / 5.0);
    const double v1 = -5.0 * std::pow(cfg.L, 1.0 / 4.0) * signed_power(z[1] - v0, 3.0 / 4.0);
    const double v2 = -3.0 * std::pow(cfg.L, 1.0 / 3.0) * signed_power(z[2] - v1, 2.0 / 3.0);
    const double v3 = -1.5 * std::sqrt(cfg.L) * signed_power(z[3] - v2, 1.0 / 2.0);
    const double v4 = -1.1 * cfg.L * switch_fn(z[4] - v3, cfg.final_switch);
    return {v0, v1, v2, v3, v4};
}

namespace detail {

template <typename Cfg, typename RhsFn>
OdeSystem build_observer_system(const TestSignal& sig, Cfg cfg, RhsFn rhs_fn,
                                std::function<double(double)> noise_fn) {
    OdeSystem sys;
    sys.dimension = 5;
    sys.rhs = [sig, cfg, rhs_fn, noise_fn](double t, const std::vector<double>& x,
                                           std::vector<double>& dxdt) {
        double a = eval_signal(sig, t, 0);
        if (noise_fn) a += noise_fn(t);
        const std::array<double, 5> z{x[0], x[1], x[2], x[3], x[4]};
        const std::array<double, 5> d = rhs_fn(z, a, cfg);
        for (int i = 0; i < 5; ++i) dxdt[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)];
    };
    return sys;
}

}  // namespace detail

inline OdeSystem build_baseline_system(const TestSignal& sig, const HgoConfig& cfg,
                                       std::function<double(double)> noise_fn = {}) {
    cfg.validate();
    return detail::build_observer_system(
        sig, cfg, [](const auto& z, double a, const HgoConfig& c) { return hgo_rhs(z, a, c); },
        std::move(noise_fn));
}

inline OdeSystem build_baseline_system(const TestSignal& sig, const HosmConfig& cfg,
                                       std::function<double(double)> noise_fn = {}) {
    cfg.validate();
    return detail::build_observer_system(
        sig, cfg, [](const auto& z, double a, const HosmConfig& c) { return hosm_rhs(z, a, c); },
        std::move(noise_fn));
}

}  // namespace swdiff
