#pragma once

// The switching differentiator of Eq. (1) and its series (cascade) connection
// of Eq. (24): stage i differentiates the previous stage's sigma output,
//   d(alpha_i)/dt = k e_i + sigma_i,   d(sigma_i)/dt = L * switch(e_i),
//   e_i = sigma_{i-1} - alpha_i,  sigma_0 = a(t).
// The switching term enters sigma through an integrator, which is what keeps
// the estimates free of peaking: |d(sigma)/dt| <= L always.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "integrators.hpp"
#include "signals.hpp"

namespace swdiff {

enum class SwitchKind { ExactSgn, Sat };

struct SwitchSpec {
    SwitchKind kind = SwitchKind::Sat;
    double epsilon = 1e-4;  // sat boundary-layer half-width; unused for exact sgn
};

// sgn(e) with sgn(0) := 0, or the sat surrogate clamp(e/eps, -1, 1).
// Odd, range [-1, 1] in both modes.
inline double switch_fn(double e, const SwitchSpec& sw) {
    if (sw.kind == SwitchKind::ExactSgn) return e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
    if (!(sw.epsilon > 0.0)) throw std::invalid_argument("switch_fn: sat epsilon must be positive");
    const double r = e / sw.epsilon;
    return r > 1.0 ? 1.0 : (r < -1.0 ? -1.0 : r);
}

struct SdParams {
    double k = 0.0;
    double L = 0.0;
    SwitchSpec switch_spec;

    void validate() const {
        if (!(k > 0.0) || !(L > 0.0)) throw std::invalid_argument("SdParams: k and L must be positive");
        if (switch_spec.kind == SwitchKind::Sat && !(switch_spec.epsilon > 0.0))
            throw std::invalid_argument("SdParams: sat epsilon must be positive");
    }
};

struct SdState {
    double alpha = 0.0;
    double sigma = 0.0;
};

struct SdDeriv {
    double alpha_dot = 0.0;
    double sigma_dot = 0.0;
};

// Eq. (1) for one stage driven by input_value.
inline SdDeriv sd_rhs(const SdState& state, double input_value, const SdParams& p) {
    const double e = input_value - state.alpha;
    return {p.k * e + state.sigma, p.L * switch_fn(e, p.switch_spec)};
}

// Cascade parameters: shared (k, L, switch) by default, per-stage overrides
// allowed (the contraction argument only needs each stage's L to dominate its
// own input's second-derivative bound).
struct SdCascadeParams {
    std::vector<SdParams> stages;

    static SdCascadeParams shared(const SdParams& p, std::size_t n_stages) {
        if (n_stages < 1) throw std::invalid_argument("SdCascadeParams: need at least one stage");
        p.validate();
        return {std::vector<SdParams>(n_stages, p)};
    }

    void validate() const {
        if (stages.empty()) throw std::invalid_argument("SdCascadeParams: need at least one stage");
        for (const auto& p : stages) p.validate();
    }
};

// Eq. (24): stage 1 is driven by a_value, stage i >= 2 by the current
// sigma_{i-1}. State layout: (alpha_1, sigma_1, ..., alpha_n, sigma_n).
inline std::vector<SdDeriv> cascade_rhs(const std::vector<SdState>& stages, double a_value,
                                        const SdCascadeParams& p) {
    if (stages.size() != p.stages.size())
        throw std::invalid_argument("cascade_rhs: state/parameter stage count mismatch");
    std::vector<SdDeriv> out(stages.size());
    double input = a_value;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        out[i] = sd_rhs(stages[i], input, p.stages[i]);
        input = stages[i].sigma;
    }
    return out;
}

// OdeSystem of dimension 2*n over the flat state (alpha_1, sigma_1, ...).
// Initial states default to zero; noise_fn, when set,
// adds measurement noise to the a(t) samples the observer sees (truth
// columns stay clean).
inline OdeSystem build_sd_system(const TestSignal& sig, const SdCascadeParams& params,
                                 std::function<double(double)> noise_fn = {}) {
    params.validate();
    const std::size_t n = params.stages.size();
    OdeSystem sys;
    sys.dimension = static_cast<int>(2 * n);
    sys.rhs = [sig, params, n, noise_fn](double t, const std::vector<double>& x,
                                         std::vector<double>& dxdt) {
        double input = eval_signal(sig, t, 0);
        if (noise_fn) input += noise_fn(t);
        for (std::size_t i = 0; i < n; ++i) {
            const double alpha = x[2 * i];
            const double sigma = x[2 * i + 1];
            const double e = input - alpha;
            const auto& p = params.stages[i];
            dxdt[2 * i] = p.k * e + sigma;
            dxdt[2 * i + 1] = p.L * switch_fn(e, p.switch_spec);
            input = sigma;
        }
    };
    return sys;
}

inline OdeSystem build_sd_system(const TestSignal& sig, const SdParams& p, std::size_t n_stages) {
    return build_sd_system(sig, SdCascadeParams::shared(p, n_stages));
}

}  // namespace swdiff
