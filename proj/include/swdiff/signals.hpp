#pragma once

// Analytic test signals (finite sinusoid sums) with closed-form derivatives
// of arbitrary order, plus seeded measurement-noise injection.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace swdiff {

enum class PhaseKind { Sine, Cosine };

struct SignalTerm {
    double amplitude = 0.0;
    double omega = 0.0;  // angular frequency [rad/s], >= 0
    PhaseKind kind = PhaseKind::Sine;
};

struct TestSignal {
    std::vector<SignalTerm> terms;
    std::string name;

    TestSignal(std::vector<SignalTerm> t, std::string n = "signal")
        : terms(std::move(t)), name(std::move(n)) {
        if (terms.empty()) throw std::invalid_argument("TestSignal: needs at least one term");
        for (const auto& term : terms) {
            if (!std::isfinite(term.amplitude) || !std::isfinite(term.omega) || term.omega < 0.0)
                throw std::invalid_argument("TestSignal: amplitudes/frequencies must be finite, omega >= 0");
        }
    }
};

// a(t) = 2 sin t + 3 cos 3t, the signal every experiment differentiates.
inline TestSignal paper_signal() {
    return TestSignal{{{2.0, 1.0, PhaseKind::Sine}, {3.0, 3.0, PhaseKind::Cosine}},
                      "2sin(t)+3cos(3t)"};
}

// d^order/dt^order of A sin(wt) is A w^order sin(wt + order*pi/2); likewise for
// cosine. The phase rotation is applied exactly via the order mod 4 cycle
// sin -> cos -> -sin -> -cos so no rounding enters beyond the final product.
inline double eval_signal(const TestSignal& sig, double t, unsigned order) {
    double acc = 0.0;
    const unsigned rot = order % 4u;
    for (const auto& term : sig.terms) {
        const double arg = term.omega * t;
        double base;
        unsigned r = rot;
        if (term.kind == PhaseKind::Cosine) r = (r + 1u) % 4u;  // cos = sin rotated once
        switch (r) {
            case 0: base = std::sin(arg); break;
            case 1: base = std::cos(arg); break;
            case 2: base = -std::sin(arg); break;
            default: base = -std::cos(arg); break;
        }
        acc += term.amplitude * std::pow(term.omega, static_cast<double>(order)) * base;
    }
    return acc;
}

// Triangle-inequality bound sum |A_i| w_i^order >= sup_t |a^(order)(t)|.
inline double derivative_bound(const TestSignal& sig, unsigned order) {
    if (order < 1) throw std::invalid_argument("derivative_bound: order must be >= 1");
    double acc = 0.0;
    for (const auto& term : sig.terms)
        acc += std::abs(term.amplitude) * std::pow(term.omega, static_cast<double>(order));
    return acc;
}

enum class NoiseKind { None, Uniform, Gaussian };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::None;
    double magnitude = 0.0;  // half-width (uniform) or standard deviation (gaussian)
    std::uint64_t seed = 0;
};

// Deterministic cross-platform noise stream: mt19937_64 with the top 53 bits
// mapped to [0,1) via ldexp, and Gaussian variates from the Marsaglia polar
// method. std::uniform_real_distribution / std::normal_distribution are
// avoided on purpose: the standard does not pin their algorithms, so traces
// would not reproduce across library implementations.
class NoiseGenerator {
public:
    explicit NoiseGenerator(const NoiseSpec& spec) : spec_(spec), rng_(spec.seed) {
        if (spec.magnitude < 0.0 || !std::isfinite(spec.magnitude))
            throw std::invalid_argument("NoiseSpec: magnitude must be finite and >= 0");
    }

    double next() {
        switch (spec_.kind) {
            case NoiseKind::None: return 0.0;
            case NoiseKind::Uniform: return spec_.magnitude * (2.0 * unit() - 1.0);
            case NoiseKind::Gaussian: return spec_.magnitude * gaussian();
        }
        return 0.0;
    }

private:
    double unit() { return std::ldexp(static_cast<double>(rng_() >> 11), -53); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * unit() - 1.0;
            v = 2.0 * unit() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    NoiseSpec spec_;
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline std::vector<double> sample_with_noise(const TestSignal& sig,
                                             const std::vector<double>& grid,
                                             const NoiseSpec& noise) {
    if (grid.empty()) throw std::invalid_argument("sample_with_noise: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sample_with_noise: grid must be strictly increasing");
    NoiseGenerator gen(noise);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) out.push_back(eval_signal(sig, t, 0) + gen.next());
    return out;
}

}  // namespace swdiff
